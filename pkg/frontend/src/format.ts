// Display-rounding rules shared across views. All probability values shown in
// the UI come from API responses; these helpers only decide how many digits of
// an already-received number to print.

export function formatPercent(p: number, decimals = 1): string {
  const factor = 10 ** decimals
  const scaled = Math.round(p * 100 * factor) / factor
  return `${scaled.toFixed(decimals)}%`
}

export function fullPrecision(p: number): string {
  return String(p)
}

export function formatMultiplier(m: number): string {
  return `${(Math.round(m * 1000) / 1000).toFixed(3)}x`
}
