from sector_verifier.memory.run_store import RunStore

__all__ = ["RunStore"]
