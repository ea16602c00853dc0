import fkt


def test_smith_normal_form():
    r = fkt.smith_normal_form([[2, 4], [6, 8]])
    assert r["D"] == [[2, 0], [0, 4]]
    assert r["rank"] == 2


def test_solve_and_kernel():
    assert fkt.solve([[2]], [4]) == [2]
    assert fkt.solve([[2]], [3]) is None
    k = fkt.kernel_basis([[2, -2]])
    assert len(k) == 2 and k[0] == k[1]


def test_cokernel_invariants():
    g = fkt.cokernel_invariants([[1], [2]])
    assert g["display"] == "Z"
    assert fkt.cokernel_invariants([[2]])["torsion"] == [2]


def test_condition_k():
    assert not fkt.condition_k([[1]])
    assert fkt.condition_k([[3]])


def test_filtered_k_theory_report():
    rep = fkt.filtered_k_theory(fkt.intro_adjacency(2))
    groups = {(iv["a"], iv["b"]): iv for iv in rep["intervals"]}
    assert groups[(1, 3)]["k0"]["display"] == "Z x Z/4"
    assert all(iv["k1"]["display"] == "0" for iv in rep["intervals"])


def test_classify_intro_family():
    e1 = fkt.intro_adjacency(1)
    e2 = fkt.intro_adjacency(2)
    e3 = fkt.intro_adjacency(3)
    iso = fkt.classify(e1, e3)
    assert iso["status"] == "isomorphic" and iso["exit_code"] == 0
    not_iso = fkt.classify(e1, e2)
    assert not_iso["status"] == "not_isomorphic" and not_iso["exit_code"] == 1


def test_sweep_counts():
    intro = fkt.sweep("intro", 2, 1, 8)
    assert len(intro["classes"]) == 3
    case2 = fkt.sweep("caseII", 2, 1, 2)
    assert len(case2["classes"]) == 4
