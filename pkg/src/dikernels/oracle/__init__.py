"""Brute-force oracles, enumeration, random generators and the search harness."""
