/** Tiny DOM helpers: element factory and error banner. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") {
      node.className = value;
    } else {
      node.setAttribute(key, value);
    }
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

/** Replace any previous banner in `root` with a visible error message. */
export function showError(root: HTMLElement, message: string): void {
  root.querySelector(".error-banner")?.remove();
  root.prepend(
    el("div", { class: "error-banner", role: "alert" }, [message]),
  );
}

export function clearError(root: HTMLElement): void {
  root.querySelector(".error-banner")?.remove();
}
