"""Test package for the lane-departure-tracker project."""
