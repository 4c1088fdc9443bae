import { ApiClient } from './api';
import { pollJob } from './poll';
import { Store } from './store';
import type { Hook, Project, Segment } from './types';

const STEP_TITLES = ['Upload paper', 'Hook & script', 'Storyboard & merge'];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderWizard(root: HTMLElement, client: ApiClient, store = new Store()) {
  const container = el('div', 'wizard');
  const nav = el('nav', 'wizard-nav');
  const status = el('div', 'status-line');
  const content = el('section', 'wizard-content');
  container.append(nav, status, content);
  root.appendChild(container);

  async function refreshProject() {
    const project = store.get().project;
    if (project) {
      store.set({ project: await client.getProject(project.project_id) });
    }
  }

  /** Run one mutating call + its job, keeping controls disabled meanwhile. */
  async function runJob(label: string, start: () => Promise<{ job_id: string }>) {
    store.set({ busy: true, error: null, statusLine: `${label}...` });
    try {
      const ref = await start();
      const job = await pollJob(client, ref.job_id, {
        onProgress: (j) =>
          store.set({ statusLine: `${label}: ${j.status} (${Math.round(j.progress * 100)}%)` }),
      });
      await refreshProject();
      if (job.status === 'failed') {
        store.set({ busy: false, error: job.error ?? `${label} failed`, statusLine: '' });
        return null;
      }
      store.set({ busy: false, statusLine: `${label}: done` });
      return job;
    } catch (err) {
      store.set({ busy: false, error: String(err), statusLine: '' });
      return null;
    }
  }

  function renderStep0(target: HTMLElement) {
    const s = store.get();
    const form = el('div', 'upload-form');
    const input = el('input') as HTMLInputElement;
    input.type = 'file';
    input.accept = 'application/pdf';
    input.id = 'pdf-input';
    const button = el('button', 'primary', 'Generate hooks');
    button.disabled = s.busy;
    button.addEventListener('click', async () => {
      const file = input.files?.[0];
      if (!file) {
        store.set({ error: 'Choose a PDF first.' });
        return;
      }
      store.set({ busy: true, error: null, statusLine: 'Uploading...' });
      try {
        const { project_id, job_id } = await client.createProject(file, file.name);
        store.set({ project: { project_id } as Project });
        const job = await pollJob(client, job_id, {
          onProgress: (j) =>
            store.set({ statusLine: `Analyzing paper: ${Math.round(j.progress * 100)}%` }),
        });
        store.set({ project: await client.getProject(project_id) });
        if (job.status === 'failed') {
          store.set({ busy: false, error: job.error ?? 'ingest failed' });
          return;
        }
        store.set({ busy: false, stepIndex: 1, statusLine: '' });
      } catch (err) {
        store.set({ busy: false, error: String(err) });
      }
    });
    form.append(input, button);
    target.appendChild(form);
  }

  function hookCard(hook: Hook, project: Project): HTMLElement {
    const s = store.get();
    const card = el('article', 'hook-card');
    if (s.selectedHookId === hook.id) card.classList.add('selected');
    card.dataset.hookId = hook.id;
    card.appendChild(el('h3', 'hook-text', hook.hook_text));
    card.appendChild(el('p', 'hook-tactic', hook.tactic));
    const scores = Object.entries(hook.scores)
      .map(([k, v]) => `${k}: ${v}`)
      .join('  ');
    card.appendChild(el('p', 'hook-scores', scores));
    hook.lint.forEach((note) => card.appendChild(el('p', 'hook-lint', note)));
    const pick = el('button', 'pick-hook', 'Use this hook');
    pick.disabled = s.busy;
    pick.addEventListener('click', () => {
      const script = project.scripts[hook.id];
      const text = script.scenes.map((sc) => sc.text).join('\n');
      store.set({ selectedHookId: hook.id });
      (document.getElementById('script-editor') as HTMLTextAreaElement).value = text;
      (document.getElementById('voice-modifier') as HTMLInputElement).value =
        project.voice_recommendations[hook.id] ?? '';
    });
    card.appendChild(pick);
    return card;
  }

  function renderStep1(target: HTMLElement) {
    const s = store.get();
    const project = s.project;
    if (!project || !project.hooks.length) {
      target.appendChild(el('p', 'empty', 'No hooks yet; upload a paper first.'));
      return;
    }
    if (project.paper) {
      target.appendChild(
        el('p', 'paper-meta', `${project.paper.title} — ${project.paper.authors.join(', ')}`),
      );
    }
    const grid = el('div', 'hook-grid');
    project.hooks.forEach((hook) => grid.appendChild(hookCard(hook, project)));
    target.appendChild(grid);

    const editor = el('textarea', 'script-editor') as HTMLTextAreaElement;
    editor.id = 'script-editor';
    editor.rows = 10;
    const voice = el('input', 'voice-modifier') as HTMLInputElement;
    voice.id = 'voice-modifier';
    voice.placeholder = 'voice modifier, e.g. with a serious tone';
    if (s.selectedHookId && project.scripts[s.selectedHookId]) {
      editor.value = project.scripts[s.selectedHookId].scenes.map((sc) => sc.text).join('\n');
      voice.value = project.voice_recommendations[s.selectedHookId] ?? '';
    }

    const preview = el('button', 'preview-voice', 'Preview voice');
    preview.disabled = s.busy;
    preview.addEventListener('click', async () => {
      if (!s.selectedHookId) {
        store.set({ error: 'Pick a hook first.' });
        return;
      }
      const hookId = s.selectedHookId;
      const modifier = voice.value;
      const job = await runJob('Voice preview', () =>
        client.previewVoice(project.project_id, hookId, modifier),
      );
      if (job?.result_ref) {
        const audio = el('audio') as HTMLAudioElement;
        audio.controls = true;
        audio.src = client.assetUrl(project.project_id, job.result_ref);
        target.appendChild(audio);
      }
    });

    const next = el('button', 'primary select-script', 'Build storyboard');
    next.disabled = s.busy;
    next.addEventListener('click', async () => {
      if (!s.selectedHookId) {
        store.set({ error: 'Pick a hook first.' });
        return;
      }
      const hookId = s.selectedHookId;
      const text = editor.value;
      const modifier = voice.value || undefined;
      const job = await runJob('Segmenting script', () =>
        client.selectScript(project.project_id, hookId, text, modifier),
      );
      if (job) store.set({ stepIndex: 2 });
    });

    target.append(editor, voice, preview, next);
  }

  function segmentCard(seg: Segment, project: Project): HTMLElement {
    const s = store.get();
    const card = el('article', `segment-card status-${seg.status}`);
    card.dataset.index = String(seg.index);
    card.appendChild(el('h4', 'segment-title', `Scene ${seg.index} — ${seg.status}`));
    const text = el('textarea', 'segment-text') as HTMLTextAreaElement;
    text.value = seg.text;
    text.rows = 3;
    card.appendChild(text);
    card.appendChild(el('p', 'segment-prompt', seg.visual_prompt));
    if (seg.manifest) {
      card.appendChild(
        el('p', 'segment-durations',
          `audio ${seg.manifest.audio_duration_s.toFixed(2)}s / ` +
          `video ${seg.manifest.video_duration_s.toFixed(2)}s`),
      );
      const video = el('video') as HTMLVideoElement;
      video.controls = true;
      video.src = client.segmentClipUrl(project.project_id, seg.index);
      card.appendChild(video);
    }
    const isFirst = seg.status === 'pending';
    const button = el('button', 'generate-segment', isFirst ? 'Generate' : 'Regenerate');
    button.disabled = s.busy || seg.status === 'generating';
    button.addEventListener('click', () => {
      const edited = text.value !== seg.text ? text.value : undefined;
      void runJob(`Scene ${seg.index}`, () =>
        isFirst && edited === undefined
          ? client.generateSegment(project.project_id, seg.index)
          : client.regenerateSegment(project.project_id, seg.index, edited),
      );
    });
    card.appendChild(button);
    return card;
  }

  function renderStep2(target: HTMLElement) {
    const s = store.get();
    const project = s.project;
    if (!project || !project.segments.length) {
      target.appendChild(el('p', 'empty', 'No storyboard yet.'));
      return;
    }
    const grid = el('div', 'storyboard-grid');
    project.segments.forEach((seg) => grid.appendChild(segmentCard(seg, project)));
    target.appendChild(grid);

    const creator = el('input', 'creator-name') as HTMLInputElement;
    creator.id = 'creator-name';
    creator.placeholder = 'creator name for the credit scene';
    const merge = el('button', 'primary merge', 'Merge final video');
    const ready = project.segments.every((seg) => seg.status === 'ready');
    merge.disabled = s.busy || !ready;
    merge.addEventListener('click', () => {
      void runJob('Merging', () => client.merge(project.project_id, creator.value));
    });
    target.append(creator, merge);

    if (project.state === 'merged' && project.final) {
      const done = el('div', 'final-panel');
      done.appendChild(
        el('p', 'final-summary',
          `Final video: ${project.final.duration_s.toFixed(2)}s — ` +
          project.final.credit.attribution_text),
      );
      const link = el('a', 'download-final', 'Download final.mp4') as HTMLAnchorElement;
      link.href = client.finalVideoUrl(project.project_id);
      link.setAttribute('download', 'final.mp4');
      done.appendChild(link);
      target.appendChild(done);
    }
  }

  const steps = [renderStep0, renderStep1, renderStep2];

  function sync() {
    const s = store.get();
    nav.innerHTML = '';
    STEP_TITLES.forEach((title, idx) => {
      const btn = el('button', idx === s.stepIndex ? 'active' : '', `${idx + 1}. ${title}`);
      btn.disabled = idx > s.stepIndex || s.busy;
      btn.addEventListener('click', () => store.set({ stepIndex: idx }));
      nav.appendChild(btn);
    });
    status.textContent = s.error ? `Error: ${s.error}` : s.statusLine;
    status.className = s.error ? 'status-line error' : 'status-line';
    content.innerHTML = '';
    steps[s.stepIndex](content);
  }

  sync();
  store.subscribe(sync);
  return store;
}
