"""crlab: simulation and analysis lab for echoed cross-resonance gates
with target rotary pulsing."""

__version__ = "0.1.0"
