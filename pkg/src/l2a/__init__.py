"""Exact symbolic checks and constructions for split Lie 2-algebroids,
matched pairs of Lie algebroids, 2-representations and Courant algebroids.

Submodules:

- ``exactpoly``: exact multivariate polynomials with rational coefficients
- ``bundles``: trivialized bundles, sections, homs and vector-valued forms
- ``anchored``: dull brackets, Dorfman and linear connections, curvatures
- ``lie2core``: split Lie 2-algebroid data, both axiom oracles, morphisms
- ``matched``: Lie algebroids, 2-representations, matched pairs, doubles
- ``courant``: Courant algebroids, Drinfeld doubles, adjoint and fat data
- ``cli``: the ``l2a`` file-driven front end
"""

__version__ = "0.1.0"
