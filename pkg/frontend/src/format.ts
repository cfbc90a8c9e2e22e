/**
 * Display formatting for agreement values.
 *
 * Kappa values come from the server and are rendered verbatim (two decimal
 * places, no client-side recomputation). Undefined per-class kappas are
 * shown as an em dash.
 */

export function formatKappa(value: number | null | undefined): string {
  if (value === null || value === undefined) {
    return "—";
  }
  return value.toFixed(2);
}

export function formatProgress(labeled: number, total: number): string {
  return `${labeled}/${total}`;
}
