"""Test suite for TV Sense."""
