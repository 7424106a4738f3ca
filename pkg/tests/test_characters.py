from fractions import Fraction

import pytest

from orbitcert.characters import (
    Arc,
    Congruence,
    IrrationalRotation,
    OffCircle,
    RootOfUnity,
    arc_gap,
    char_position,
    character_from_json,
    chord2_lower_bound,
    circular_distance,
    constraint_from_json,
    rotation_interval,
)
from orbitcert.errors import ConstraintKindError, InsufficientDepthError, PreconditionError
from orbitcert.exact import CR

GOLDEN = IrrationalRotation([1] * 12)


def test_character_validation():
    with pytest.raises(PreconditionError):
        OffCircle(CR(0))
    with pytest.raises(PreconditionError):
        OffCircle(CR(0, 1))  # |i| = 1
    with pytest.raises(PreconditionError):
        RootOfUnity(4, 2)  # gcd != 1
    with pytest.raises(PreconditionError):
        RootOfUnity(1, 0)
    with pytest.raises(PreconditionError):
        IrrationalRotation([3])
    with pytest.raises(PreconditionError):
        IrrationalRotation([1, 0, 2])


def test_char_position_off_circle():
    assert char_position(OffCircle(CR(2)), 3) == CR(8)
    assert char_position(OffCircle(CR(2)), -2) == CR(Fraction(1, 4))


def test_char_position_root_of_unity():
    assert char_position(RootOfUnity(4, 1), 6) == 2  # z^6 = -1


def test_golden_convergents():
    convs = GOLDEN.convergents()[1:6]
    assert convs == [
        Fraction(1),
        Fraction(1, 2),
        Fraction(2, 3),
        Fraction(3, 5),
        Fraction(5, 8),
    ]


def test_golden_alpha_interval():
    lo, hi = GOLDEN.alpha_interval()
    # (sqrt(5)-1)/2 ~ 0.6180339887
    assert lo < Fraction(6180339887, 10**10) < hi
    assert hi - lo < Fraction(1, 10**4)


def test_rotation_interval_example():
    # frac(5 * alpha) ~ 0.0901699
    lo, hi = rotation_interval(GOLDEN, 5)
    assert lo < Fraction(901699, 10**7) < hi
    assert 0 <= lo < hi < 1


def test_rotation_interval_depth_error():
    shallow = IrrationalRotation([1, 1, 1])
    with pytest.raises(InsufficientDepthError) as ei:
        rotation_interval(shallow, 10**6)
    assert ei.value.needed_depth > 3


def test_congruence_constraint():
    ch = RootOfUnity(4, 1)
    c = Congruence(2, 4)
    assert c.admits(ch, 6)
    assert not c.admits(ch, 5)
    with pytest.raises(ConstraintKindError):
        c.admits(OffCircle(CR(2)), 6)
    with pytest.raises(ConstraintKindError):
        c.admits(RootOfUnity(3, 1), 6)  # modulus mismatch
    with pytest.raises(PreconditionError):
        Congruence(4, 4)


def test_arc_constraint():
    arc = Arc(Fraction(0), Fraction(1, 4))
    # frac(3 * alpha) ~ 0.854 -> outside; frac(13 * alpha) ~ 0.034 -> inside
    assert not arc.admits(GOLDEN, 3)
    assert arc.admits(GOLDEN, 13)
    with pytest.raises(ConstraintKindError):
        arc.admits(RootOfUnity(4, 1), 1)
    with pytest.raises(PreconditionError):
        Arc(Fraction(1, 2), Fraction(1, 2))


def test_arc_never_asserts_on_straddle():
    # enclosure too wide to decide -> admits returns False, never guesses
    shallow = IrrationalRotation([1, 1])
    assert not Arc(Fraction(0), Fraction(1, 100)).admits(shallow, 10**9)
    assert Arc(Fraction(0), Fraction(1)).admits(GOLDEN, 1)


def test_circular_distance():
    assert circular_distance(Fraction(0), Fraction(3, 4)) == Fraction(1, 4)
    assert circular_distance(Fraction(1, 8), Fraction(3, 8)) == Fraction(1, 4)


def test_chord_bound():
    assert chord2_lower_bound(Fraction(1, 2)) == 4  # antipodal: exact chord 2
    assert chord2_lower_bound(Fraction(3, 8)) == Fraction(9, 4)
    assert chord2_lower_bound(Fraction(0)) == 0
    with pytest.raises(PreconditionError):
        chord2_lower_bound(Fraction(3, 4))


def test_arc_gap():
    a = Arc(Fraction(0), Fraction(1, 8))
    b = Arc(Fraction(1, 2), Fraction(5, 8))
    assert arc_gap(a, b) == Fraction(3, 8)
    assert arc_gap(a, Arc(Fraction(1, 16), Fraction(1, 4))) == 0


def test_serialization_round_trips():
    for ch in (OffCircle(CR(2, 1)), RootOfUnity(5, 2), GOLDEN):
        assert character_from_json(ch.to_json()) == ch
    for c in (Congruence(1, 3), Arc(Fraction(1, 3), Fraction(1, 2))):
        assert constraint_from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        character_from_json({"kind": "nope", "payload": {}})
