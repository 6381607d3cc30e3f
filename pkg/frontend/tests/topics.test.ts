import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api";
import { mountTopicsPage } from "../src/pages/topics";
import {
  errorResponse,
  flush,
  installMockApi,
  TOPICS,
} from "./helpers";

function root(): HTMLElement {
  const node = document.createElement("div");
  document.body.append(node);
  return node;
}

async function mountAndSelectTopic0(node: HTMLElement): Promise<void> {
  await mountTopicsPage(node, new ApiClient());
  node
    .querySelector<SVGCircleElement>('.point[data-index="0"]')!
    .dispatchEvent(new MouseEvent("click", { bubbles: true }));
  await flush();
}

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.replaceChildren();
});

describe("topics page", () => {
  it("renders a marker and label per topic", async () => {
    installMockApi();
    const node = root();
    await mountTopicsPage(node, new ApiClient());
    expect(node.querySelectorAll(".point")).toHaveLength(2);
    const labels = [...node.querySelectorAll(".point-label")].map(
      (t) => t.textContent,
    );
    expect(labels).toEqual(["Topic 0", "Topic 1"]);
  });

  it("scales marker radius with importance", async () => {
    installMockApi();
    const node = root();
    await mountTopicsPage(node, new ApiClient());
    const radii = [...node.querySelectorAll<SVGCircleElement>(".point")].map(
      (c) => Number(c.getAttribute("r")),
    );
    expect(radii[0]).toBeGreaterThan(radii[1]); // importance 12.5 vs 7.5
  });

  it("selecting a topic renders its term bars from the API values", async () => {
    const api = installMockApi();
    const node = root();
    await mountAndSelectTopic0(node);
    expect(api.calls("GET /api/topics/0")).toContain("GET /api/topics/0");
    const labels = [...node.querySelectorAll(".bar-label")].map(
      (n) => n.textContent,
    );
    const values = [...node.querySelectorAll(".bar-value")].map(
      (n) => n.textContent,
    );
    expect(labels).toEqual(["alpha", "gamma"]);
    expect(values).toEqual(["0.9", "0.4"]); // verbatim API numbers
    expect(node.querySelector(".wordcloud")).not.toBeNull();
    expect(node.querySelector(".topic-name")?.textContent).toBe("Topic 0");
  });

  it("rename issues PATCH and updates name and map label in place", async () => {
    const api = installMockApi();
    const node = root();
    await mountAndSelectTopic0(node);
    const input = node.querySelector<HTMLInputElement>(".rename-input")!;
    input.value = "sports";
    node.querySelector<HTMLButtonElement>(".rename-button")!.click();
    await flush();
    const patches = api.requests.filter((r) => r.method === "PATCH");
    expect(patches).toHaveLength(1);
    expect(patches[0].url).toBe("/api/topics/0/name");
    expect(patches[0].body).toEqual({ name: "sports" });
    expect(node.querySelector(".topic-name")?.textContent).toBe("sports");
    const point = node.querySelector('.point[data-index="0"] title');
    expect(point?.textContent).toBe("sports");
  });

  it("shows a conflict message on a 409 rename", async () => {
    installMockApi({
      "PATCH /api/topics/0/name": () =>
        errorResponse(409, "stale_bundle", "bundle changed on disk"),
    });
    const node = root();
    await mountAndSelectTopic0(node);
    const input = node.querySelector<HTMLInputElement>(".rename-input")!;
    input.value = "sports";
    node.querySelector<HTMLButtonElement>(".rename-button")!.click();
    await flush();
    expect(node.querySelector(".rename-status")?.textContent).toBe(
      "conflict: bundle changed on disk",
    );
    expect(node.querySelector(".topic-name")?.textContent).toBe(
      TOPICS[0].name,
    );
  });

  it("shows an error banner when the map cannot load", async () => {
    installMockApi({
      "GET /api/maps/topics": () =>
        errorResponse(500, "boom", "server exploded"),
    });
    const node = root();
    await mountTopicsPage(node, new ApiClient());
    expect(node.querySelector(".error-banner")?.textContent).toContain(
      "server exploded",
    );
    expect(node.querySelector(".topics-page")).toBeNull(); // no blank page
  });
});
