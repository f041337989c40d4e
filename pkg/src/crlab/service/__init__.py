"""Service layer: pydantic request/response schemas, pure handlers, FastAPI app."""
