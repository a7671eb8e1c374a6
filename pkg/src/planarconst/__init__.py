"""Verified enclosures of the planar-graph constants."""
