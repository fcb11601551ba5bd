import pytest

from arboreal import mwsieve
from arboreal.hyperelliptic import C2, INFINITY, enumerate_jacobian, enumerate_points, jacobian


@pytest.fixture(scope="module")
def config():
    return mwsieve.c2_preset()


@pytest.fixture(scope="module")
def pipeline():
    return mwsieve.run_c2_pipeline()


def test_preset_roundtrip(config):
    again = mwsieve.SieveConfig.from_json(config.to_json())
    assert again.to_json() == config.to_json()
    assert config.curve == C2


def test_generators_reduce_to_valid_divisors(config):
    for q in (3, 5, 7, 11, 13):
        jac = jacobian(C2, q)
        for g in config.generators:
            assert jac.is_valid(g.reduce(C2, q))


def test_p0_plus_18_q0_vanishes_mod_5(config):
    P, Q = config.generators
    jac = jacobian(C2, 5)
    assert jac.add(P.reduce(C2, 5), jac.mul(18, Q.reduce(C2, 5))) == jac.zero


def test_torsion_is_trivial():
    rep = mwsieve.torsion_gcd_check(C2, 3, 11)
    assert rep["orders"] == [24, 1351] and rep["gcd"] == 1 and rep["trivial_torsion"]


@pytest.mark.parametrize("q,ell", [(3, 2), (3, 3), (5, 2), (5, 3), (5, 5), (7, 2), (7, 3)])
def test_sylow_membership_matches_bruteforce(q, ell):
    test = mwsieve.ell_multiple_test(C2, q, ell)
    brute = mwsieve.ell_multiples_bruteforce(C2, q, ell)
    for D in enumerate_jacobian(C2, q):
        assert (D in test) == (D in brute)
    assert test.index == len(enumerate_jacobian(C2, q)) // len(brute)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_three_local_solution_routes_agree(config, q):
    gens = config.generators
    targets = enumerate_points(C2, q)
    fast = mwsieve.local_solutions(C2, q, gens, targets)
    pairs = mwsieve.local_solutions_pairs(C2, q, gens, targets)
    assert fast.solutions == pairs.solutions
    try:
        dlog = mwsieve.local_solutions_dlog(C2, q, gens, targets)
    except ValueError:
        pytest.skip("subgroup not monogenic at this prime")
    assert dlog.solutions == pairs.solutions


def test_combine_matches_joint_enumeration(config):
    gens = config.generators
    A = mwsieve.local_solutions_pairs(C2, 3, gens, enumerate_points(C2, 3))
    B = mwsieve.local_solutions_pairs(C2, 5, gens, enumerate_points(C2, 5))
    joint = mwsieve._combine(A, B)
    M1, M2 = joint.orders
    brute = {(a, b) for a in range(M1) for b in range(M2)
             if (a % A.orders[0], b % A.orders[1]) in A.solutions
             and (a % B.orders[0], b % B.orders[1]) in B.solutions}
    assert joint.solutions == brute


def test_residue_classifier_splits_all_points(config):
    classes = mwsieve.chabauty_residue_classifier(C2, 5, config.differential)
    together = classes["potentially_multi"] + classes["at_most_one"]
    assert sorted(map(str, together)) == sorted(map(str, enumerate_points(C2, 5)))


def test_pipeline_torsion_and_independence(pipeline):
    assert pipeline["torsion"]["gcd"] == 1
    assert not pipeline["independence"]["cyclic"]
    assert pipeline["kernel_of_reduction"]["is_identity"]


def test_pipeline_index_injective_for_all_pairs(pipeline):
    checks = pipeline["index_checks"]
    assert sorted(checks, key=int) == ["2", "3", "5", "7", "11"]
    assert all(c["injective"] for c in checks.values())


def test_pipeline_sieve_and_controls(pipeline):
    verdicts = pipeline["sieve"]["targets"]
    for t in ("(3,2)", "(3,3)", "(4,2)", "(4,3)"):
        assert verdicts[t]["verdict"] == "eliminated"
    controls = pipeline["soundness_controls"]["targets"]
    assert controls["(1,1)"]["verdict"] == "survives"
    assert controls[INFINITY]["verdict"] == "survives"
    assert pipeline["verdict"] == "C2(Q) = {inf, (1,1), (1,-1)}"


def test_sieve_needs_target_prime_among_sieve_primes(config):
    with pytest.raises(ValueError):
        mwsieve.sieve_eliminate(config, sieve_primes=[3, 7])


def test_too_few_primes_leave_targets_alive(config):
    rep = mwsieve.sieve_eliminate(config, sieve_primes=[3, 5])
    assert not rep.eliminated((3, 2))
    assert rep.eliminated((4, 2))


def test_single_prime_cannot_separate_generators(config):
    with pytest.raises(ValueError):
        mwsieve.sieve_eliminate(config, sieve_primes=[5])


def test_same_prime_twice_gives_no_information():
    rep = mwsieve.torsion_gcd_check(C2, 5, 5)
    assert rep["gcd"] == 180 and not rep["trivial_torsion"]


def test_residue_classes_for_reduced_differential(config):
    classes = mwsieve.chabauty_residue_classifier(C2, 5, [0, 2, 1])
    assert set(classes["potentially_multi"]) == {(3, 2), (3, 3)}
    assert {(1, 1), (1, 4)} <= set(classes["at_most_one"])
    zero = mwsieve.chabauty_residue_classifier(C2, 5, [])
    assert len(zero["potentially_multi"]) == 7 and not zero["at_most_one"]


@pytest.mark.parametrize("ell,S", [(2, [3, 5]), (5, [5, 19]), (11, [13, 37])])
def test_index_injectivity_examples(config, ell, S):
    assert mwsieve.index_injectivity_check(C2, ell, S, config.generators)["injective"]
