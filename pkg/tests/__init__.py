"""Unit test package for devfuse."""
