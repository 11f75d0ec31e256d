"""ChangeGPT: a tool-using LLM agent for query-driven change analysis over
bi-temporal remote sensing image pairs."""

__version__ = "0.1.0"
