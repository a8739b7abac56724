/** Trailing-edge debounce: a burst of calls fires the function once, after
 * `ms` of silence, with the latest argument. Dragging a slider therefore
 * issues at most one request per quiet window. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, ms);
  };
}

export const FIT_DEBOUNCE_MS = 150;
