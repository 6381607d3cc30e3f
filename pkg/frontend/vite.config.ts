import { defineConfig } from "vitest/config";

export default defineConfig({
  build: {
    outDir: "../src/topiclens/static",
    emptyOutDir: true,
    // Flat output: the Python package ships static/* without nesting.
    assetsDir: ".",
  },
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
  },
});
