/** Keyboard shortcuts: digits 1..8 map to the zones in canonical order. */

export const ZONES = ["PI", "BS", "FA", "C", "T", "G", "FI", "O"] as const;

export type ZoneCode = (typeof ZONES)[number];

/** Zone for a pressed key, or null for any key outside the closed 1..8 map. */
export function zoneForKey(key: string): ZoneCode | null {
  if (key.length !== 1 || key < "1" || key > "8") {
    return null;
  }
  return ZONES[key.charCodeAt(0) - "1".charCodeAt(0)];
}

export function shortcutForZone(zone: ZoneCode): number {
  return ZONES.indexOf(zone) + 1;
}
