import { defineConfig } from "vitest/config";

// In dev the API runs separately (`sfair serve`); proxy it so the app can
// use same-origin requests in both dev and the `--ui-dir` deployment.
export default defineConfig({
  server: {
    proxy: {
      "/health": "http://127.0.0.1:8000",
      "/cities": "http://127.0.0.1:8000",
      "/recommendations": "http://127.0.0.1:8000",
    },
  },
  test: {
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
