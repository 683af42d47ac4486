"""Test package for utils."""
