"""Tests for edgesplit."""
