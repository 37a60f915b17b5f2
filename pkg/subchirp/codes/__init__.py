"""Codebooks: binary subspace chirps, baselines and export"""
