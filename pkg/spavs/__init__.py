""" SpaVS = Spatial Variable Selection with Python
Criterion-based selection of the relevant covariates of a multivariate linear regression observed on a spatial grid,
with the simulators, tuning, comparators and Monte Carlo harness used to study it.
"""
