"""Kramer-Mesner toolkit for simple t-designs with prescribed automorphism groups."""
