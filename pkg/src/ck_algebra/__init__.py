"""Exact computations for Cayley-Klein groups, their Lie algebras and contractions.

Modules:

* ``exact_scalars``: the field Q(i, sqrt 2) with exact rational parts.
* ``pimenov``: the nilpotent Pimenov algebra and j-valuations.
* ``ck_groups``: Pimenov-valued matrices, generators, j-orthogonality.
* ``rootsys``: root systems and closed-form Cartan-Weyl brackets.
* ``contraction``: Gamma tables and Levi-Maltsev decompositions.
* ``relcat``: categories of linear relations and their ordered structure.
* ``repkit``: spinor functors, Berezin kernels, lowering functors.
* ``cli``: the ``ck-algebra`` command.
"""

__version__ = "0.1.0"
