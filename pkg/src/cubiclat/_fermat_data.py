"""Reference data for the Fermat cubic fourfold.

A linear form (k, a, b) stands for w^k z_a + z_b with w = exp(2 pi i / 3).
"""

REFERENCE_PLANES = (((2, 1, 5), (2, 2, 4), (2, 3, 6)),
 ((2, 1, 5), (0, 2, 4), (2, 3, 6)),
 ((2, 1, 4), (2, 2, 6), (1, 3, 5)),
 ((2, 1, 4), (2, 2, 6), (0, 3, 5)),
 ((2, 1, 4), (1, 2, 4), (2, 3, 6)),
 ((1, 1, 4), (0, 2, 6), (0, 3, 5)),
 ((1, 1, 4), (2, 2, 5), (0, 3, 6)),
 ((0, 1, 4), (2, 2, 5), (1, 3, 6)),
 ((1, 1, 4), (1, 2, 3), (2, 5, 6)),
 ((0, 1, 4), (2, 2, 3), (2, 5, 6)),
 ((1, 1, 3), (2, 2, 6), (0, 4, 5)),
 ((2, 1, 3), (1, 2, 5), (1, 4, 6)),
 ((0, 1, 3), (1, 2, 5), (1, 4, 6)),
 ((2, 1, 3), (2, 2, 4), (2, 5, 6)),
 ((2, 1, 3), (0, 2, 4), (1, 5, 6)),
 ((1, 1, 3), (2, 2, 4), (0, 5, 6)),
 ((2, 1, 2), (0, 3, 6), (2, 4, 5)),
 ((0, 1, 2), (0, 3, 6), (2, 4, 5)),
 ((0, 1, 2), (0, 3, 6), (1, 4, 5)),
 ((0, 1, 2), (2, 3, 5), (2, 4, 6)),
 ((0, 1, 2), (2, 3, 4), (2, 5, 6)))

REFERENCE_GRAM = ((3, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, -1, 0, 1, 0, 0, 0, 0, 0),
 (-1, 3, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0),
 (0, 0, 3, -1, 1, 0, 0, 1, 0, 1, -1, 0, 0, 1, 1, 1, 0, 0, 1, 0, 0),
 (0, 1, -1, 3, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1),
 (0, 0, 1, 1, 3, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, -1, 1),
 (0, 1, 0, 1, 0, 3, 1, 1, -1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0),
 (0, 0, 0, 1, 0, 1, 3, 1, -1, 0, 1, 1, 0, 0, 0, 1, 1, 1, -1, 1, 0),
 (0, 1, 1, 0, 1, 1, 1, 3, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 0),
 (0, 1, 0, 0, 0, -1, -1, 0, 3, 1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 0, 1),
 (0, 1, 1, 0, 0, 0, 0, 1, 1, 3, 0, 0, 1, 1, 1, 0, 1, 0, 0, 0, 1),
 (0, 0, -1, 1, 0, 1, 1, 0, 0, 0, 3, 1, 1, 0, 0, -1, 1, 0, 0, 1, 1),
 (1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 1, 3, -1, -1, 1, 0, 1, 0, 0, 1, 0),
 (0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 1, -1, 3, 1, 0, 0, 0, 1, 0, 0, 1),
 (-1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0, -1, 1, 3, 1, 1, 1, 0, 1, 0, 1),
 (0, 1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 1, 0, 1, 3, 0, 1, 0, 1, 1, 0),
 (1, 0, 1, 0, 0, 0, 1, 0, 0, 0, -1, 0, 0, 1, 0, 3, 0, 1, 0, 0, 0),
 (0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 1, 0, 1, 1, 0, 3, -1, 1, 0, 1),
 (0, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1, 0, 0, 1, -1, 3, -1, 1, -1),
 (0, 0, 1, 0, 1, 0, -1, 0, 1, 0, 0, 0, 0, 1, 1, 0, 1, -1, 3, -1, 1),
 (0, 1, 0, 0, -1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0, 1, -1, 3, -1),
 (0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1, 0, 1, 1, 0, 0, 1, -1, 1, -1, 3))

REFERENCE_H2 = (0, -1, -1, 1, 0, -1, 0, 1, -1, 1, -1, 1, 1, 1, -1, 0, -1, 0, 2, 2, 0)

# dual generators as (numerator vector, denominator)
REFERENCE_ETA = ((0, -2, -2, -2, -1, -2, -2, -1, 0, -2, 0, 0, 0, -2, -1, -1, -1, 0, 0, 1, 0), 3)
REFERENCE_THETA = ((-4, -5, -2, 1, 1, 0, 2, 1, -3, 2, -2, -4, -1, -6, -2, -4, -7, -7, -5, -1, 1), 9)

# root orthogonal to h^2: integer part plus 3*theta
REFERENCE_ROOT = (2, 2, 1, -1, 0, 0, -1, -1, 1, -1, 1, 1, 0, 2, 1, 1, 3, 3, 1, 0, 0)

AUXILIARY_PLANES = {'P11': ((1, 1, 6), (2, 2, 4), (2, 3, 5)),
 'P12': ((1, 1, 3), (2, 2, 4), (0, 5, 6)),
 'P21': ((2, 1, 2), (2, 3, 6), (1, 4, 5)),
 'P22': ((1, 1, 2), (0, 3, 5), (0, 4, 6)),
 'P31': ((2, 1, 6), (0, 2, 4), (0, 3, 5)),
 'P32': ((2, 1, 5), (1, 2, 3), (1, 4, 6)),
 'P41': ((0, 1, 5), (2, 2, 6), (1, 3, 4)),
 'P42': ((1, 1, 4), (1, 2, 5), (1, 3, 6)),
 'P51': ((2, 1, 5), (2, 2, 4), (1, 3, 6)),
 'P52': ((2, 1, 2), (0, 3, 5), (0, 4, 6)),
 'P': ((0, 1, 3), (0, 2, 5), (2, 4, 6))}

AUXILIARY_COORDS = {'P11': (0, -1, -1, 1, -1, -1, 0, 1, -1, 1, -1, 1, 1, 1, -1, 0, -1, 0, 2, 1, 0),
 'P12': (0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0),
 'P21': (-2, -3, -4, 2, 0, -3, -1, 3, -4, 3, -3, 3, 3, 2, -2, 1, -3, -1, 5, 5, 0),
 'P22': (-1, -2, -3, 2, 0, -3, 0, 2, -3, 2, -3, 3, 3, 2, -2, 0, -3, -1, 4, 4, 0),
 'P31': (-3, -6, -7, 4, 0, -4, -1, 4, -6, 5, -6, 6, 6, 4, -3, 1, -6, -2, 8, 8, -1),
 'P32': (-1, -2, -2, 2, 0, -2, 0, 1, -2, 2, -2, 1, 2, 1, -1, 0, -2, 0, 3, 3, 0),
 'P41': (0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, -1, 0, 0, 0, 0, 0, -1, -1, 0),
 'P42': (1, 3, 4, -2, 0, 3, 0, -2, 4, -3, 3, -3, -3, -3, 2, 0, 4, 1, -5, -4, 1),
 'P51': (1, 2, 3, -1, 0, 1, 0, -1, 2, -2, 2, -2, -2, -1, 1, -1, 2, 1, -3, -2, 1),
 'P52': (3, 5, 6, -3, 0, 4, 1, -4, 5, -4, 5, -5, -5, -3, 3, -1, 5, 2, -7, -7, 1),
 'P': (-3, -6, -8, 3, 1, -4, 1, 3, -6, 6, -6, 6, 7, 4, -3, 1, -7, -3, 9, 8, -2)}

# transcendental lattice of the associated K3 surface (recorded only)
K3_TRANSCENDENTAL_GRAM = ((6, 3), (3, 6))
