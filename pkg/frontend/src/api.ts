import type { AnalyzeOptions, AnalyzeResponse, ModelEntry } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
  ) {
    super(`request failed with ${status}`);
  }
}

async function post<T>(url: string, payload: unknown): Promise<T> {
  const response = await fetch(url, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
  if (!response.ok) {
    throw new ApiError(response.status, await response.json().catch(() => null));
  }
  return (await response.json()) as T;
}

export async function analyze(
  modelId: string,
  sentences: string[],
  options: AnalyzeOptions,
): Promise<AnalyzeResponse> {
  return post<AnalyzeResponse>("/api/analyze", {
    model_id: modelId,
    sentences,
    options,
  });
}

export async function listModels(): Promise<ModelEntry[]> {
  const response = await fetch("/api/models");
  if (!response.ok) {
    throw new ApiError(response.status, await response.json().catch(() => null));
  }
  const body = (await response.json()) as { models: ModelEntry[] };
  return body.models;
}
