"""Project state, persistence, orchestration and REST API."""
