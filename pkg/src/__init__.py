"""Source package initialization."""

# This file makes src a Python package