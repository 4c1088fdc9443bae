export interface Hook {
  id: string;
  hook_text: string;
  tactic: string;
  scores: Record<string, number>;
  word_count: number;
  lint: string[];
}

export interface Scene {
  index: number;
  role: string;
  text: string;
  word_count: number;
  est_duration_s: number;
}

export interface Script {
  hook_ref: string;
  scenes: Scene[];
  total_est_duration_s: number;
  warnings: string[];
}

export type SegmentStatus = 'pending' | 'generating' | 'ready' | 'failed';

export interface Segment {
  index: number;
  text: string;
  visual_prompt: string;
  status: SegmentStatus;
  attempts: number;
  manifest?: {
    audio_duration_s: number;
    video_duration_s: number;
    padding_s: number;
    [key: string]: unknown;
  };
}

export interface VoiceInfo {
  baseline: string;
  recommended_modifier: string;
  user_modifier: string;
  merged_prompt: string;
}

export interface Project {
  project_id: string;
  state: string;
  paper: { title: string; authors: string[]; page_count: number } | null;
  hooks: Hook[];
  scripts: Record<string, Script>;
  voice_recommendations: Record<string, string>;
  selected_hook: string | null;
  edited_text: string;
  voice: VoiceInfo | null;
  segments: Segment[];
  final: { duration_s: number; credit: { attribution_text: string } } | null;
}

export interface Job {
  job_id: string;
  kind: string;
  status: 'pending' | 'running' | 'succeeded' | 'failed';
  progress: number;
  error: string | null;
  result_ref: string | null;
}

export interface JobRef {
  job_id: string;
}
