/** Latest-wins ordering for in-flight requests: responses that arrive after
 * a newer request has already been rendered are dropped, so the plots never
 * regress to an older state. */
export class StaleGuard {
  private issued = 0;
  private rendered = 0;

  /** Take a ticket for a request about to be sent. */
  issue(): number {
    return ++this.issued;
  }

  /** True exactly when this response is newer than everything rendered. */
  admit(ticket: number): boolean {
    if (ticket <= this.rendered) return false;
    this.rendered = ticket;
    return true;
  }
}
