"""Exact toolkit for the greatest common valuation of phi_n and psi_n^2
at points on elliptic curves over Q_p, two independent ways: a closed-form
prediction driven by the reduction profile, and a brute-force
division-polynomial oracle."""

__version__ = "0.1.0"
