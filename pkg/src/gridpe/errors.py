class ValidationError(ValueError):
    """Input or configuration violates a documented constraint."""
