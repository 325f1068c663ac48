/** The steering loop's plumbing: debounced re-queries with latest-wins.
 *
 * Dragging a slider emits a burst of changes; only the last one should hit
 * the API, and if a new hunt starts while an old one is in flight, the old
 * response must never clobber the new state.
 */

export interface Debounced<A extends unknown[]> {
  call(...args: A): void;
  cancel(): void;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): Debounced<A> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return {
    call(...args: A): void {
      if (timer !== null) clearTimeout(timer);
      timer = setTimeout(() => {
        timer = null;
        fn(...args);
      }, waitMs);
    },
    cancel(): void {
      if (timer !== null) clearTimeout(timer);
      timer = null;
    },
  };
}

/** Run async work so that starting a new run aborts and supersedes the old.
 *
 * `run` resolves to null when the work was superseded (or aborted mid
 * flight); only the latest caller ever sees a result.
 */
export class LatestWins {
  private controller: AbortController | null = null;

  async run<T>(work: (signal: AbortSignal) => Promise<T>): Promise<T | null> {
    this.controller?.abort();
    const controller = new AbortController();
    this.controller = controller;
    try {
      const result = await work(controller.signal);
      return this.controller === controller ? result : null;
    } catch (error) {
      if (controller.signal.aborted) return null;
      throw error;
    }
  }

  cancel(): void {
    this.controller?.abort();
    this.controller = null;
  }
}
