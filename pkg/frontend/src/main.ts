import { ApiClient } from "./api";
import { mountApp } from "./app";
import "./style.css";

const root = document.getElementById("app");
if (root) {
  void mountApp(root, new ApiClient());
}
