import { analyze, ApiError, listModels } from "./api.js";
import { buildHeatmapView } from "./heatmap.js";
import { applySuggestedOrder, joinSentences } from "./ordering.js";
import { applyResponse, beginAnalyze, initialState, withEdit } from "./state.js";
import { firstQuantileScores, selectTopN } from "./topn.js";
const IDLE_DEBOUNCE_MS = 2000;
let state = initialState();
let debounceTimer;
function el(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing element #${id}`);
    return node;
}
const editor = el("editor");
const modelSelect = el("model-select");
const nSummaryInput = el("n-summary");
const jsdInput = el("jsd-threshold");
const dropDeltaInput = el("drop-delta");
const analyzeButton = el("analyze-button");
const applyOrderButton = el("apply-order");
const statusLine = el("status");
const heatmapRoot = el("heatmap");
function sentencesFromEditor() {
    return editor.value
        .split("\n")
        .map((line) => line.trim())
        .filter((line) => line.length > 0);
}
function setStatus(text, kind = "ok") {
    statusLine.textContent = text;
    statusLine.dataset.kind = kind;
}
function renderEmptyState(message) {
    heatmapRoot.innerHTML = "";
    const panel = document.createElement("div");
    panel.className = "empty-state";
    panel.textContent = message;
    heatmapRoot.appendChild(panel);
}
function renderHeatmap(view) {
    heatmapRoot.innerHTML = "";
    const table = document.createElement("div");
    table.className = "heatmap-grid";
    const segmentOf = new Map();
    view.segments.forEach(([start, end], segmentIndex) => {
        for (let i = start; i <= end; i += 1)
            segmentOf.set(i, segmentIndex);
    });
    const boundaries = new Set(view.boundaryAfterRow);
    view.rows.forEach((row) => {
        const rowNode = document.createElement("div");
        rowNode.className = "heatmap-row";
        rowNode.dataset.segment = String((segmentOf.get(row.index) ?? 0) % 2);
        if (row.degenerate)
            rowNode.classList.add("degenerate");
        const label = document.createElement("span");
        label.className = "row-label";
        label.textContent = String(row.index + 1);
        rowNode.appendChild(label);
        const badge = document.createElement("span");
        badge.className = "summary-badge";
        if (row.summaryRank !== null) {
            badge.textContent = `S${row.summaryRank + 1}`;
            badge.classList.add("active");
        }
        rowNode.appendChild(badge);
        const strip = document.createElement("div");
        strip.className = "cell-strip";
        row.cells.forEach((cell) => {
            const cellNode = document.createElement("div");
            cellNode.className = "cell";
            cellNode.style.backgroundColor = cell.color;
            cellNode.title = cell.value.toFixed(3);
            strip.appendChild(cellNode);
        });
        const dot = document.createElement("div");
        dot.className = "wq-dot";
        dot.style.left = `${(row.dotFraction * 100).toFixed(2)}%`;
        dot.title = `weighted quantile ${row.weightedQuantile.toFixed(2)}`;
        strip.appendChild(dot);
        rowNode.appendChild(strip);
        const text = document.createElement("span");
        text.className = "row-text";
        text.textContent = row.text;
        rowNode.appendChild(text);
        table.appendChild(rowNode);
        if (boundaries.has(row.index)) {
            const marker = document.createElement("div");
            marker.className = "boundary-marker";
            marker.title = "possible incoherence between these sentences";
            table.appendChild(marker);
        }
    });
    heatmapRoot.appendChild(table);
}
function rerender() {
    const response = state.lastResponse;
    if (!response) {
        renderEmptyState("Analyze some text to see its position heatmap.");
        return;
    }
    const n = Number(nSummaryInput.value) || response.summary.length;
    const override = n === response.summary.length
        ? undefined
        : selectTopN(firstQuantileScores(response.ppd), n);
    const view = buildHeatmapView(response, override);
    renderHeatmap(view);
    const dirtyNote = state.dirty ? " (edited since last analysis)" : "";
    setStatus(`coherence ${view.coherenceTau.toFixed(3)} over ${view.nRows} sentences${dirtyNote}`);
    applyOrderButton.disabled = state.dirty;
}
async function runAnalyze() {
    const sentences = sentencesFromEditor();
    const modelId = modelSelect.value;
    if (!modelId) {
        setStatus("no model selected", "error");
        return;
    }
    if (sentences.length === 0) {
        renderEmptyState("The editor is empty. One sentence per line.");
        return;
    }
    const begun = beginAnalyze(state);
    state = begun.state;
    const analyzedText = editor.value;
    setStatus("analyzing…", "busy");
    try {
        const response = await analyze(modelId, sentences, {
            n_summary: Number(nSummaryInput.value) || 3,
            jsd_threshold: Number(jsdInput.value) || 0.2,
            drop_delta: dropDeltaInput.value ? Number(dropDeltaInput.value) : null,
        });
        state = applyResponse(state, begun.seq, analyzedText, response);
        rerender();
    }
    catch (error) {
        if (error instanceof ApiError && error.status >= 400 && error.status < 500) {
            const detail = error.body && typeof error.body === "object" && "detail" in error.body
                ? String(error.body.detail)
                : `request rejected (${error.status})`;
            renderEmptyState(detail);
            setStatus(detail, "error");
        }
        else {
            setStatus(`analysis failed: ${String(error)} — retry when ready`, "error");
        }
    }
}
function scheduleIdleAnalyze() {
    if (debounceTimer !== undefined)
        window.clearTimeout(debounceTimer);
    debounceTimer = window.setTimeout(() => {
        if (state.dirty)
            void runAnalyze();
    }, IDLE_DEBOUNCE_MS);
}
async function populateModels() {
    try {
        const models = await listModels();
        modelSelect.innerHTML = "";
        for (const model of models) {
            const option = document.createElement("option");
            option.value = model.model_id;
            const tag = model.corpus_tag ? ` (${model.corpus_tag})` : "";
            option.textContent = `${model.model_id}${tag}`;
            modelSelect.appendChild(option);
        }
        if (models.length === 0) {
            setStatus("no models registered; train one first", "error");
        }
    }
    catch (error) {
        setStatus(`could not list models: ${String(error)}`, "error");
    }
}
editor.addEventListener("input", () => {
    state = withEdit(state, editor.value);
    rerender();
    scheduleIdleAnalyze();
});
analyzeButton.addEventListener("click", () => void runAnalyze());
nSummaryInput.addEventListener("change", () => rerender());
jsdInput.addEventListener("change", () => void runAnalyze());
dropDeltaInput.addEventListener("change", () => void runAnalyze());
applyOrderButton.addEventListener("click", () => {
    const response = state.lastResponse;
    if (!response || state.dirty)
        return;
    const reordered = applySuggestedOrder(response.sentences, response.ordering.permutation);
    editor.value = joinSentences(reordered);
    state = withEdit(state, editor.value);
    rerender();
    void runAnalyze();
});
void populateModels();
rerender();
