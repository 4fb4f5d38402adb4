export class ApiError extends Error {
    constructor(status, body) {
        super(`request failed with ${status}`);
        this.status = status;
        this.body = body;
    }
}
async function post(url, payload) {
    const response = await fetch(url, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
    });
    if (!response.ok) {
        throw new ApiError(response.status, await response.json().catch(() => null));
    }
    return (await response.json());
}
export async function analyze(modelId, sentences, options) {
    return post("/api/analyze", {
        model_id: modelId,
        sentences,
        options,
    });
}
export async function listModels() {
    const response = await fetch("/api/models");
    if (!response.ok) {
        throw new ApiError(response.status, await response.json().catch(() => null));
    }
    const body = (await response.json());
    return body.models;
}
