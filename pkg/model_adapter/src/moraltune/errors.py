class AdapterError(Exception):
    """Base error for the training/prediction adapter."""
