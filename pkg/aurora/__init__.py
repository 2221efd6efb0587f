"""Aurora-DD - pre-calibrated phase-coherence compensation for single qubits."""

__version__ = "1.0.0"
