import type { ApiClient } from './api';
import type { Job } from './types';

export interface PollOptions {
  intervalMs?: number;
  timeoutMs?: number;
  onProgress?: (job: Job) => void;
}

const sleep = (ms: number) => new Promise((r) => setTimeout(r, ms));

/** Poll a job until it reaches a terminal state; resolves with the final
 * Job either way so callers can branch on status. */
export async function pollJob(client: ApiClient, jobId: string, opts: PollOptions = {}): Promise<Job> {
  const interval = opts.intervalMs ?? 400;
  const deadline = Date.now() + (opts.timeoutMs ?? 300_000);
  for (;;) {
    const job = await client.getJob(jobId);
    opts.onProgress?.(job);
    if (job.status === 'succeeded' || job.status === 'failed') {
      return job;
    }
    if (Date.now() > deadline) {
      throw new Error(`job ${jobId} timed out`);
    }
    await sleep(interval);
  }
}
