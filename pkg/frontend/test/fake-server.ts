import type { FetchLike } from '../src/api';
import type { Hook, Job, Project, Script } from '../src/types';

/** In-memory stand-in for the REST API, good enough for wizard flows. */
export class FakeServer {
  project: Project;
  jobs = new Map<string, Job>();
  requests: { method: string; path: string; body?: unknown }[] = [];
  private jobCounter = 0;

  constructor(project?: Partial<Project>) {
    this.project = {
      project_id: 'proj_test',
      state: 'hooks_ready',
      paper: { title: 'A Study', authors: ['Ada Lovelace', 'Ben Ng'], page_count: 4 },
      hooks: [],
      scripts: {},
      voice_recommendations: {},
      selected_hook: null,
      edited_text: '',
      voice: null,
      segments: [],
      final: null,
      ...project,
    };
  }

  posts(): { method: string; path: string; body?: unknown }[] {
    return this.requests.filter((r) => r.method === 'POST');
  }

  private newJob(kind: string): Job {
    const job: Job = {
      job_id: `job_${++this.jobCounter}`,
      kind,
      status: 'succeeded',
      progress: 1,
      error: null,
      result_ref: null,
    };
    this.jobs.set(job.job_id, job);
    return job;
  }

  fetch: FetchLike = async (input, init) => {
    const method = init?.method ?? 'GET';
    const path = input;
    let body: unknown;
    if (typeof init?.body === 'string') body = JSON.parse(init.body);
    this.requests.push({ method, path, body });

    const json = (data: unknown, status = 200) =>
      new Response(JSON.stringify(data), {
        status,
        headers: { 'Content-Type': 'application/json' },
      });

    let m: RegExpMatchArray | null;
    if (method === 'POST' && path === '/projects') {
      return json({ project_id: this.project.project_id, job_id: this.newJob('hooks').job_id }, 202);
    }
    if ((m = path.match(/^\/jobs\/(.+)$/))) {
      const job = this.jobs.get(m[1]);
      return job ? json(job) : json({ error: 'unknown_job', message: m[1] }, 404);
    }
    if (method === 'GET' && (m = path.match(/^\/projects\/([^/]+)$/))) {
      if (m[1] !== this.project.project_id) {
        return json({ error: 'unknown_project', message: m[1] }, 404);
      }
      return json(this.project);
    }
    if (method === 'POST' && path.endsWith('/script')) {
      const req = body as { hook_id: string; text: string };
      this.project.selected_hook = req.hook_id;
      this.project.edited_text = req.text;
      this.project.state = 'storyboarding';
      this.project.segments = req.text.split('\n').map((text, i) => ({
        index: i + 1,
        text,
        visual_prompt: `A cinematic abstract rendering of beat ${i + 1} in motion`,
        status: 'pending' as const,
        attempts: 0,
      }));
      return json({ job_id: this.newJob('scripts').job_id }, 202);
    }
    if (method === 'POST' && (m = path.match(/\/segments\/(\d+)\/(re)?generate$/))) {
      const seg = this.project.segments[Number(m[1]) - 1];
      const edited = (body as { text?: string } | undefined)?.text;
      if (edited) seg.text = edited;
      seg.status = 'ready';
      seg.manifest = { audio_duration_s: 4.0, video_duration_s: 4.5, padding_s: 0.5 };
      if (this.project.segments.every((s) => s.status === 'ready')) {
        this.project.state = 'ready_to_merge';
      }
      return json({ job_id: this.newJob('scene').job_id }, 202);
    }
    if (method === 'POST' && path.endsWith('/voice/preview')) {
      const job = this.newJob('voice');
      job.result_ref = 'assets/abc123';
      return json({ job_id: job.job_id }, 202);
    }
    if (method === 'POST' && path.endsWith('/merge')) {
      this.project.state = 'merged';
      this.project.final = {
        duration_s: 38.5,
        credit: { attribution_text: 'The original research is authored by Ada Lovelace and Ben Ng. This video is created with PaperTok.' },
      };
      return json({ job_id: this.newJob('merge').job_id }, 202);
    }
    return json({ error: 'error', message: `no route: ${method} ${path}` }, 500);
  };
}

export function makeHook(id: string, text: string, tactic = 'curiosity'): Hook {
  return {
    id,
    hook_text: text,
    tactic,
    scores: { relatability: 4, curiosity: 5 },
    word_count: text.split(/\s+/).length,
    lint: [],
  };
}

export function makeScript(hookText: string, nScenes = 8): Script {
  const scenes = Array.from({ length: nScenes }, (_, i) => ({
    index: i + 1,
    role: i === 0 ? 'hook' : 'context',
    text: i === 0 ? hookText : `Narration beat number ${i + 1} for the script.`,
    word_count: 7,
    est_duration_s: 7 / 3,
  }));
  return {
    hook_ref: hookText,
    scenes,
    total_est_duration_s: scenes.reduce((a, s) => a + s.est_duration_s, 0),
    warnings: [],
  };
}
