export function initialState() {
    return {
        editorText: "",
        selectedModel: null,
        options: { n_summary: 3, jsd_threshold: 0.2, drop_delta: null },
        lastResponse: null,
        lastAnalyzedText: null,
        dirty: false,
        issuedSeq: 0,
        renderedSeq: 0,
    };
}
export function withEdit(state, text) {
    return {
        ...state,
        editorText: text,
        dirty: state.lastAnalyzedText !== text,
    };
}
export function beginAnalyze(state) {
    const seq = state.issuedSeq + 1;
    return { state: { ...state, issuedSeq: seq }, seq };
}
export function applyResponse(state, seq, analyzedText, response) {
    if (seq <= state.renderedSeq || seq > state.issuedSeq) {
        return state; // stale or unknown response: superseded by a newer edit
    }
    return {
        ...state,
        renderedSeq: seq,
        lastResponse: response,
        lastAnalyzedText: analyzedText,
        dirty: state.editorText !== analyzedText,
    };
}
