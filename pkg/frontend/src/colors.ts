/**
 * White-to-red scale: probability 0 maps to white, the row maximum maps to
 * the deepest red. Intensity is relative to the row so short, flat
 * distributions still show their structure.
 */
export function cellColor(value: number, rowMax: number): string {
  if (rowMax <= 0 || value <= 0) {
    return "rgb(255,255,255)";
  }
  const intensity = Math.min(value / rowMax, 1);
  const other = Math.round(255 * (1 - intensity));
  return `rgb(255,${other},${other})`;
}
