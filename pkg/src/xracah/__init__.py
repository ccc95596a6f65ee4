"""Exceptional (q-)Racah family verifier."""
