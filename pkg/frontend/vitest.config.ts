import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    // the integration suite synthesizes a corpus and boots a live service
    testTimeout: 30_000,
    hookTimeout: 120_000,
  },
});
