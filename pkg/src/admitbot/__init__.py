"""Retrieval-augmented chatbot engine for university admission questions."""

__version__ = "0.1.0"
