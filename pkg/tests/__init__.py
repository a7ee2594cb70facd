"""Test suite for anisonorm."""
