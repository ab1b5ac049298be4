"""Partitioned shortest-path indexes."""
