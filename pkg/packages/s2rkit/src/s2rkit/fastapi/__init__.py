from .routers import build_packing_router

__all__ = ["build_packing_router"]
