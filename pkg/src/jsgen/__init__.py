"""Grammar-constrained generation of JavaScript expressions from descriptions."""
__version__ = "0.1.0"
