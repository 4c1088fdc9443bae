import type { Project } from './types';

export interface AppState {
  stepIndex: number; // 0 upload, 1 hook+script, 2 storyboard+merge
  project: Project | null;
  selectedHookId: string | null;
  busy: boolean;
  statusLine: string;
  error: string | null;
}

type Listener = (state: AppState) => void;

export class Store {
  private state: AppState = {
    stepIndex: 0,
    project: null,
    selectedHookId: null,
    busy: false,
    statusLine: '',
    error: null,
  };
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  set(patch: Partial<AppState>) {
    this.state = { ...this.state, ...patch };
    this.listeners.forEach((fn) => fn(this.state));
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }
}
