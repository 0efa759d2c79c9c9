# mixphase Tests
"""Test suite for mixphase."""
