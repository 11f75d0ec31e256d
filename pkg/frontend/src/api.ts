/** Thin typed client over the gateway's documented HTTP JSON API. */

import type { DialogueTurn, ImageRecord, QueryResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
    public readonly payload: unknown = null,
  ) {
    super(message);
  }
}

async function parseJson(response: Response): Promise<any> {
  const text = await response.text();
  try {
    return text ? JSON.parse(text) : {};
  } catch {
    return { error: text };
  }
}

async function request(url: string, init?: RequestInit): Promise<any> {
  const response = await fetch(url, init);
  const payload = await parseJson(response);
  if (!response.ok) {
    throw new ApiError(response.status, payload?.error ?? response.statusText, payload);
  }
  return payload;
}

export class GatewayClient {
  constructor(private readonly baseUrl: string = "") {}

  async createSession(): Promise<string> {
    const payload = await request(`${this.baseUrl}/sessions`, { method: "POST" });
    return payload.session_id as string;
  }

  async uploadImage(
    sessionId: string,
    role: "pre" | "cur",
    data: Blob,
    pairId?: string,
  ): Promise<ImageRecord> {
    const params = new URLSearchParams({ role });
    if (pairId) params.set("pair_id", pairId);
    return request(`${this.baseUrl}/sessions/${sessionId}/images?${params}`, {
      method: "POST",
      headers: { "Content-Type": "image/png" },
      body: data,
    });
  }

  async crop(
    sessionId: string,
    parentId: string,
    region: { x: number; y: number; w: number; h: number },
  ): Promise<ImageRecord> {
    return request(`${this.baseUrl}/sessions/${sessionId}/crop`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ parent_id: parentId, ...region }),
    });
  }

  async query(sessionId: string, question: string): Promise<QueryResponse> {
    return request(`${this.baseUrl}/sessions/${sessionId}/query`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question }),
    });
  }

  async history(sessionId: string): Promise<DialogueTurn[]> {
    const payload = await request(`${this.baseUrl}/sessions/${sessionId}/history`);
    return payload.turns as DialogueTurn[];
  }

  async listImages(sessionId: string): Promise<ImageRecord[]> {
    const payload = await request(`${this.baseUrl}/sessions/${sessionId}/images`);
    return payload.images as ImageRecord[];
  }

  imageUrl(imageId: string): string {
    return `${this.baseUrl}/images/${imageId}`;
  }
}
