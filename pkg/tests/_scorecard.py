"""Shared registry for the acceptance scorecard lines."""

lines: list[str] = []
