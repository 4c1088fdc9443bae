import type { Job, JobRef, Project } from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the REST API; every method is one request. */
export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, init);
    if (!res.ok) {
      let code = 'error';
      let message = `HTTP ${res.status}`;
      try {
        const body = await res.json();
        code = body.error ?? code;
        message = body.message ?? message;
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(res.status, code, message);
    }
    return res.json() as Promise<T>;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: body === undefined ? {} : { 'Content-Type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  createProject(pdf: Blob, filename = 'paper.pdf'): Promise<{ project_id: string; job_id: string }> {
    const form = new FormData();
    form.append('pdf', pdf, filename);
    return this.request('/projects', { method: 'POST', body: form });
  }

  getProject(projectId: string): Promise<Project> {
    return this.request(`/projects/${projectId}`);
  }

  getJob(jobId: string): Promise<Job> {
    return this.request(`/jobs/${jobId}`);
  }

  selectScript(projectId: string, hookId: string, text: string, voiceModifier?: string): Promise<JobRef> {
    return this.post(`/projects/${projectId}/script`, {
      hook_id: hookId,
      text,
      voice_modifier: voiceModifier ?? null,
    });
  }

  previewVoice(projectId: string, hookId: string, modifier: string): Promise<JobRef> {
    return this.post(`/projects/${projectId}/voice/preview`, { hook_id: hookId, modifier });
  }

  generateSegment(projectId: string, index: number): Promise<JobRef> {
    return this.post(`/projects/${projectId}/segments/${index}/generate`);
  }

  regenerateSegment(projectId: string, index: number, text?: string): Promise<JobRef> {
    return this.post(`/projects/${projectId}/segments/${index}/regenerate`, {
      text: text ?? null,
    });
  }

  merge(projectId: string, creatorName: string, attributionOverride?: string): Promise<JobRef> {
    return this.post(`/projects/${projectId}/merge`, {
      creator_name: creatorName,
      attribution_override: attributionOverride ?? null,
    });
  }

  segmentClipUrl(projectId: string, index: number): string {
    return `${this.baseUrl}/projects/${projectId}/segments/${index}/clip.mp4`;
  }

  assetUrl(projectId: string, resultRef: string): string {
    return `${this.baseUrl}/projects/${projectId}/${resultRef}`;
  }

  finalVideoUrl(projectId: string): string {
    return `${this.baseUrl}/projects/${projectId}/final.mp4`;
  }

  async downloadFinal(projectId: string): Promise<Blob> {
    const res = await this.fetchImpl(this.finalVideoUrl(projectId));
    if (!res.ok) {
      throw new ApiError(res.status, 'error', `HTTP ${res.status}`);
    }
    return res.blob();
  }
}
