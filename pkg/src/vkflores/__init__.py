"""Van Kampen-Flores type obstructions from Stiefel-Whitney heights of deleted products."""

__version__ = "0.1.0"
