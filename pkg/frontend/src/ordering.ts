/** Rearrange sentences into the induced order (permutation lists original
 * indices in their new order). */
export function applySuggestedOrder<T>(items: T[], permutation: number[]): T[] {
  if (permutation.length !== items.length) {
    throw new Error(
      `permutation of length ${permutation.length} does not fit ${items.length} items`,
    );
  }
  return permutation.map((original) => items[original]);
}

/** Split editor text into one sentence per line for re-assembly. */
export function joinSentences(sentences: string[]): string {
  return sentences.join("\n");
}
