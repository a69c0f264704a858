"""Exact evaluation of a Casson-type invariant for homology S^1 x S^3's.

Subpackages and modules:

* ``knots``, ``catalog`` - Seifert-matrix knot invariants
* ``manifolds``, ``invariants`` - expression trees and their evaluation
* ``pillowcase`` - SU(2) character-variety geometry on T^3
* ``csflow`` - Chern-Simons gradient flow near a central connection
* ``cli`` - the ``furuta-ohta`` command
"""

__version__ = "0.1.0"
