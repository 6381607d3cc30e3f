import { ApiClient } from "./api";
import { el, showError } from "./dom";
import { mountDocumentsPage } from "./pages/documents";
import { mountGroupsPage } from "./pages/groups";
import { mountTopicsPage } from "./pages/topics";
import { mountWordsPage } from "./pages/words";

type PageMount = (root: HTMLElement, client: ApiClient) => Promise<void>;

const PAGES: [string, PageMount][] = [
  ["Topics", mountTopicsPage],
  ["Words", mountWordsPage],
  ["Documents", mountDocumentsPage],
  ["Groups", mountGroupsPage],
];

/** Build the navigation and mount the first page. */
export async function mountApp(
  root: HTMLElement,
  client: ApiClient,
): Promise<void> {
  root.replaceChildren();
  let meta;
  try {
    meta = await client.meta();
  } catch (error) {
    showError(root, `API unreachable: ${(error as Error).message}`);
    return;
  }

  // A groupless bundle hides the Groups page entirely.
  const pages = meta.has_groups
    ? PAGES
    : PAGES.filter(([name]) => name !== "Groups");

  const content = el("main", { class: "content" });
  const nav = el("nav", { class: "nav" });
  const buttons: HTMLButtonElement[] = [];
  for (const [name, mount] of pages) {
    const button = el("button", { class: "nav-button" }, [name]);
    button.addEventListener("click", () => {
      for (const other of buttons) {
        other.classList.toggle("active", other === button);
      }
      void mount(content, client);
    });
    buttons.push(button);
    nav.append(button);
  }
  root.append(nav, content);
  buttons[0].classList.add("active");
  await pages[0][1](content, client);
}
