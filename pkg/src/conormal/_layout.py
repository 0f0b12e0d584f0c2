"""Row layout of a compiled Hamiltonian term.

Must stay in sync with the enum in ``_flowkernel.pyx``.
"""

KIND = 0
SCALE = 1
FREQ = 2
R0 = 3
R1 = 4
Q0 = 5
P0 = 6
RQ = 7
RP = 8
AMP = 9
DEG = 10
COS0 = 11
SIN1 = 44
WIDTH = 76

MAX_DEGREE = 32

LIFTED = 0.0
BUMP = 1.0
