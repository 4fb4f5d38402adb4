/** Rearrange sentences into the induced order (permutation lists original
 * indices in their new order). */
export function applySuggestedOrder(items, permutation) {
    if (permutation.length !== items.length) {
        throw new Error(`permutation of length ${permutation.length} does not fit ${items.length} items`);
    }
    return permutation.map((original) => items[original]);
}
/** Split editor text into one sentence per line for re-assembly. */
export function joinSentences(sentences) {
    return sentences.join("\n");
}
