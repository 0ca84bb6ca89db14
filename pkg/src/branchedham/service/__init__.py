"""Service layer: pydantic request models, report-building handlers and the
FastAPI application.  The CLI is a thin client of the same handlers."""
