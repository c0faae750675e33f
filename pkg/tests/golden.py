"""Reference expressions (left sides unless stated)."""
from jetdiff.jetalgebra import JetExpression, JetPoly, Side, jet_var, parse_dsym_laurent


def expression(side: Side, rows: dict) -> JetExpression:
    poly = JetPoly()
    for mu, text in rows.items():
        jet = JetPoly.const(1)
        for k, e in enumerate(mu, start=1):
            if e:
                jet = jet * jet_var(side.letter, k) ** e
        poly = poly + jet * parse_dsym_laurent(text)
    return JetExpression(side, poly)


J1_LEFT = {(1,): "1/R[1,0]"}
J1_RIGHT = {(1,): "-1/R[0,1]"}

J2_LEFT = {
    (0, 1): "1/R[1,0]",
    (2,): "-R[1,1]/R[1,0]^2 + R[0,1]*R[2,0]/R[1,0]^3",
}
J2_RIGHT = {
    (0, 1): "-1/R[0,1]",
    (2,): "R[1,1]/R[0,1]^2 - R[1,0]*R[0,2]/R[0,1]^3",
}

# canonical order-3 form after circulation pairs cancel
J3_LEFT = {
    (0, 0, 1): "1/R[1,0]",
    (1, 1): "-3*R[1,1]/R[1,0]^2 + 3*R[0,1]*R[2,0]/R[1,0]^3",
    (3,): (
        "-6*R[0,1]*R[2,0]*R[1,1]/R[1,0]^4 + 3*R[0,1]^2*R[2,0]^2/R[1,0]^5"
        " - R[1,2]/R[1,0]^2 + 2*R[0,1]*R[2,1]/R[1,0]^3 - R[0,1]^2*R[3,0]/R[1,0]^4"
    ),
}

# order-3 form obtained by elimination of the higher partials
J3_ELIMINATION_LEFT = {
    (0, 0, 1): "1/R[1,0]",
    (1, 1): "-3*R[1,1]/R[1,0]^2 + 3*R[0,1]*R[2,0]/R[1,0]^3",
    (3,): (
        "-6*R[0,1]*R[1,1]*R[2,0]/R[1,0]^4 + 3*R[0,1]^2*R[2,0]^2/R[1,0]^5"
        " + 3*R[0,1]*R[2,1]/R[1,0]^3 - R[0,1]^2*R[3,0]/R[1,0]^4"
    ),
}

# order 4: reference blocks
J4_SPOT = {
    (1, 0, 1): "-4*R[1,1]/R[1,0]^2 + 4*R[0,1]*R[2,0]/R[1,0]^3",
    (0, 2): "-3*R[1,1]/R[1,0]^2 + 3*R[0,1]*R[2,0]/R[1,0]^3",
}
# selected monomials of the (y')^4 block: (Laurent monomial text, coefficient)
J4_QUARTIC_SPOT = [
    ("R[2,0]*R[1,1]*R[0,2]/R[1,0]^4", -6),
    ("R[0,1]*R[2,0]*R[1,1]^2/R[1,0]^5", 30),
    ("R[0,1]*R[2,0]^2*R[0,2]/R[1,0]^5", 6),
    ("R[0,1]^2*R[2,0]^2*R[1,1]/R[1,0]^6", -45),
    ("R[0,1]^3*R[2,0]^3/R[1,0]^7", 15),
    ("R[1,3]/R[1,0]^2", -1),
    ("R[0,1]*R[2,2]/R[1,0]^3", 3),
    ("R[0,1]^2*R[3,1]/R[1,0]^4", -3),
    ("R[0,1]^3*R[4,0]/R[1,0]^5", 1),
]
# the remaining (y')^4 monomials
J4_QUARTIC_REST = [
    ("R[1,1]*R[1,2]/R[1,0]^3", 2),
    ("R[0,2]*R[2,1]/R[1,0]^3", 2),
    ("R[0,1]*R[2,0]*R[1,2]/R[1,0]^4", -8),
    ("R[0,1]*R[1,1]*R[2,1]/R[1,0]^4", -14),
    ("R[0,1]*R[0,2]*R[3,0]/R[1,0]^4", -2),
    ("R[0,1]^2*R[2,0]*R[2,1]/R[1,0]^5", 18),
    ("R[0,1]^2*R[1,1]*R[3,0]/R[1,0]^5", 12),
    ("R[0,1]^3*R[2,0]*R[3,0]/R[1,0]^6", -10),
]

# trivialization components, right side (x-jets)
TRIV1 = {(1,): "-R[1,0]/R[0,1]"}
TRIV2 = {
    (0, 1): "-R[1,0]/R[0,1]",
    (2,): "-R[2,0]/R[0,1] + 2*R[1,0]*R[1,1]/R[0,1]^2 - R[1,0]^2*R[0,2]/R[0,1]^3",
}
TRIV3_MIXED = "-3*R[2,0]/R[0,1] + 6*R[1,0]*R[1,1]/R[0,1]^2 - 3*R[1,0]^2*R[0,2]/R[0,1]^3"

# d^5 R along a disc in one variable, canonical term order:
# (jet monomial in x, R[k,0] order, coefficient)
FAA5 = [
    ((0, 0, 0, 0, 1), 1, 1),
    ((1, 0, 0, 1), 2, 5),
    ((0, 1, 1), 2, 10),
    ((2, 0, 1), 3, 10),
    ((1, 2), 3, 15),
    ((3, 1), 4, 10),
    ((5,), 5, 1),
]
