import { defineConfig } from 'vitest/config'

export default defineConfig({
  test: {
    include: ['tests/**/*.test.ts'],
    // the live suite spawns two API servers and shells out to the CLI
    testTimeout: 120_000,
    hookTimeout: 120_000,
  },
})
