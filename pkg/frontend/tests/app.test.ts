import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiClient } from "../src/api";
import { mountApp } from "../src/app";
import { flush, installMockApi, META } from "./helpers";

function root(): HTMLElement {
  const node = document.createElement("div");
  document.body.append(node);
  return node;
}

afterEach(() => {
  vi.unstubAllGlobals();
  document.body.replaceChildren();
});

describe("app navigation", () => {
  it("shows four pages when the bundle has groups", async () => {
    installMockApi();
    const node = root();
    await mountApp(node, new ApiClient());
    const names = [...node.querySelectorAll(".nav-button")].map(
      (b) => b.textContent,
    );
    expect(names).toEqual(["Topics", "Words", "Documents", "Groups"]);
  });

  it("hides the Groups page for a groupless bundle", async () => {
    installMockApi({ "GET /api/meta": { ...META, has_groups: false } });
    const node = root();
    await mountApp(node, new ApiClient());
    const names = [...node.querySelectorAll(".nav-button")].map(
      (b) => b.textContent,
    );
    expect(names).toEqual(["Topics", "Words", "Documents"]);
  });

  it("mounts the topics page first", async () => {
    installMockApi();
    const node = root();
    await mountApp(node, new ApiClient());
    await flush();
    expect(node.querySelector(".topics-page")).not.toBeNull();
    expect(node.querySelector(".nav-button.active")?.textContent).toBe(
      "Topics",
    );
  });

  it("switches pages on navigation clicks", async () => {
    installMockApi();
    const node = root();
    await mountApp(node, new ApiClient());
    await flush();
    const buttons = [...node.querySelectorAll<HTMLButtonElement>(".nav-button")];
    buttons[1].click();
    await flush();
    expect(node.querySelector(".words-page")).not.toBeNull();
    buttons[3].click();
    await flush();
    expect(node.querySelector(".groups-page")).not.toBeNull();
  });

  it("shows an error banner when the API is unreachable", async () => {
    installMockApi({
      "GET /api/meta": () => {
        throw new Error("boom");
      },
    });
    const node = root();
    await mountApp(node, new ApiClient());
    expect(node.querySelector(".error-banner")).not.toBeNull();
  });
});
