from hypothesis import given, strategies as st

from solenoid_lab.profinite import ModulusChain, ProfiniteInt, embed_integer, factorial_chain, geometric_chain
from solenoid_lab.rank_one import INF, BaerType, SolenoidTower1D, isomorphic, type_from_tower
from solenoid_lab.suspension import (
    Odometer,
    first_return,
    matches_dual_type,
    orbit_covers_level,
    orbit_of_zero,
)

DY = ModulusChain((2, 4, 8))


def test_first_return_examples():
    o = Odometer(DY)
    assert first_return(o, ProfiniteInt(DY, (1, 3, 7))).residues == (0, 0, 0)
    assert first_return(o, embed_integer(0, DY)) == embed_integer(1, DY)
    x = embed_integer(5, DY)
    for k in (1, 2, 3):
        y = x
        for _ in range(DY.modulus(k)):
            y = o(y)
        assert y.project(k) == x.project(k)


@given(st.integers(-10**9, 10**9))
def test_first_return_commutes_with_projection(a):
    chain = factorial_chain(8)
    o = Odometer(chain)
    x = embed_integer(a, chain)
    y = o(x)
    for k in range(1, 9):
        assert y.project(k) == (x.project(k) + 1) % chain.modulus(k)


def test_orbit_covers_level():
    assert orbit_covers_level(Odometer(geometric_chain(2, 3)), 3)
    assert orbit_covers_level(Odometer(factorial_chain(4)), 4)
    assert orbit_covers_level(Odometer(ModulusChain((1, 3))), 1)


def test_orbit_of_zero_is_full():
    chain = factorial_chain(5)
    o = Odometer(chain)
    for k in range(1, 6):
        assert sorted(orbit_of_zero(o, k)) == list(range(chain.modulus(k)))


def test_dual_type_examples():
    assert matches_dual_type(Odometer(geometric_chain(2, 5))) == BaerType.from_mapping({2: INF})
    assert matches_dual_type(Odometer(factorial_chain())).default == INF
    assert matches_dual_type(Odometer(geometric_chain(6, 4))) == BaerType.from_mapping({2: INF, 3: INF})


def test_explicit_chain_reads_finite_block():
    o = Odometer(ModulusChain((2, 6, 12)))
    assert matches_dual_type(o) == BaerType.from_mapping({2: 2, 3: 1})
    assert isomorphic(matches_dual_type(o, repeat=True), type_from_tower(SolenoidTower1D((2, 3, 2), True)))
