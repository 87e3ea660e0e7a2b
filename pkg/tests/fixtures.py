"""Small symbolic instances with hand-checkable answers.

Each pair was chosen so that the per-point costs of the listed matching
sequences come out exactly as stated; the strings use b as the shared first
symbol.
"""

from subtraj import make_trajectory

# unit edit distance 4 via: drop q2, insert d3, swap at q5/d5 and q8/d8
EDIT_PAIR = ("bbaddabcc", "baedeabdc")
EDIT_SEQUENCE = [1, 1, 2, 4, 5, 6, 7, 8, 9]
EDIT_POINT_COSTS = [0, 1, 0, 1, 1, 0, 0, 1, 0]

# 0/1 warping costs; q4 equals d4 but still pays for absorbing d3
WARP_PAIR_A = ("bbaccabac", "bdbcdabbc")
WARP_SEQUENCE_A = [1, 1, 2, 4, 5, 6, 7, 8, 9]
WARP_POINT_COSTS_A = [0, 0, 1, 1, 1, 0, 0, 1, 0]

# q9 equals d9 and pays 1 for absorbing the skipped d7, d8
WARP_PAIR_B = ("bbccdadbd", "bcdddbdcd")
WARP_SEQUENCE_B = [1, 1, 2, 2, 3, 3, 5, 6, 9]
WARP_POINT_COSTS_B = [0, 0, 0, 0, 0, 1, 0, 0, 1]

# unit edit search where C[4,8] is reached from C[3,6] by inserting d7;
# d1 = b matches only q3
STEP_PAIR = ("adba", "bdbadbead")


def pair(p):
    q, d = p
    return make_trajectory("q", list(q)), make_trajectory("d", list(d))
