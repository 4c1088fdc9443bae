import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api';
import { FakeServer, makeHook, makeScript } from './fake-server';

function client(server: FakeServer): ApiClient {
  return new ApiClient('', server.fetch);
}

describe('ApiClient', () => {
  it('creates a project from a PDF upload', async () => {
    const server = new FakeServer();
    const res = await client(server).createProject(new Blob([new Uint8Array([1, 2])]));
    expect(res.project_id).toBe('proj_test');
    expect(res.job_id).toMatch(/^job_/);
    expect(server.requests).toHaveLength(1);
    expect(server.requests[0]).toMatchObject({ method: 'POST', path: '/projects' });
  });

  it('fetches projects and jobs', async () => {
    const server = new FakeServer({ hooks: [makeHook('hook_1', 'Why so fast?')] });
    const c = client(server);
    const ref = await c.createProject(new Blob([new Uint8Array([1])]));
    const job = await c.getJob(ref.job_id);
    expect(job.status).toBe('succeeded');
    const project = await c.getProject(ref.project_id);
    expect(project.hooks[0].hook_text).toBe('Why so fast?');
  });

  it('issues exactly one request per mutating method', async () => {
    const server = new FakeServer({
      scripts: { hook_1: makeScript('Why?') },
      segments: [],
    });
    const c = client(server);
    const calls: [string, () => Promise<unknown>][] = [
      ['script', () => c.selectScript('proj_test', 'hook_1', 'a\nb', 'calm')],
      ['generate', () => c.generateSegment('proj_test', 1)],
      ['regenerate', () => c.regenerateSegment('proj_test', 2, 'new text')],
      ['preview', () => c.previewVoice('proj_test', 'hook_1', 'calm')],
      ['merge', () => c.merge('proj_test', 'Casey')],
    ];
    for (const [, call] of calls) {
      const before = server.posts().length;
      await call();
      expect(server.posts().length).toBe(before + 1);
    }
  });

  it('serializes request bodies the API expects', async () => {
    const server = new FakeServer();
    const c = client(server);
    await c.selectScript('proj_test', 'hook_2', 'line one\nline two');
    expect(server.posts()[0].body).toEqual({
      hook_id: 'hook_2',
      text: 'line one\nline two',
      voice_modifier: null,
    });
    await c.merge('proj_test', 'Casey', 'Custom credits.');
    expect(server.posts()[1].body).toEqual({
      creator_name: 'Casey',
      attribution_override: 'Custom credits.',
    });
  });

  it('maps error payloads to ApiError', async () => {
    const server = new FakeServer();
    const err = await client(server)
      .getProject('missing')
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(404);
    expect((err as ApiError).code).toBe('unknown_project');
  });

  it('builds stable media URLs', () => {
    const c = new ApiClient('http://api');
    expect(c.finalVideoUrl('p1')).toBe('http://api/projects/p1/final.mp4');
    expect(c.segmentClipUrl('p1', 3)).toBe('http://api/projects/p1/segments/3/clip.mp4');
    expect(c.assetUrl('p1', 'assets/ff00')).toBe('http://api/projects/p1/assets/ff00');
  });
});
