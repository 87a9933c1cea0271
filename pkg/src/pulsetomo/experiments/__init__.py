"""
Experiment drivers built on top of the numerical helpers: sweeps, QPT correction, acceptance.
"""
