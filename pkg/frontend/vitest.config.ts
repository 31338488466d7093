import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // *.itest.ts suites skip themselves unless EXPLORER_API_URL is set
    include: ["tests/**/*.test.ts", "tests/**/*.itest.ts"],
    environment: "node",
  },
});
