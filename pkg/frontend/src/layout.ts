/**
 * Pure layout computation: which keys render full-size.
 *
 * The layout is a pure function of (prediction set, idle flag, shrink
 * factor); the keyboard component never re-ranks or second-guesses the
 * service. Keys in the returned set render at scale 1, everything else
 * shares one reduced scale. An empty set (or idle engine) carries no
 * information, so nothing shrinks.
 */

export interface KeyView {
  ch: string;
  scale: number;
  predicted: boolean;
}

export interface Prediction {
  ch: string;
  p: number;
}

export function computeLayout(
  keys: readonly string[],
  predictions: readonly Prediction[],
  idle: boolean,
  shrinkFactor: number,
): KeyView[] {
  if (shrinkFactor <= 0 || shrinkFactor > 1) {
    throw new RangeError(`shrinkFactor must be in (0, 1], got ${shrinkFactor}`);
  }
  const predicted = new Set(idle ? [] : predictions.map((e) => e.ch));
  const informative = predicted.size > 0;
  return keys.map((ch) => {
    const hit = predicted.has(ch);
    return {
      ch,
      predicted: hit,
      scale: hit || !informative ? 1 : shrinkFactor,
    };
  });
}
