"""HTTP service wrapping the calculator; the CLI is a thin client of it."""
