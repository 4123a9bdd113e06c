"""Design validation and the unital constructions."""

import pytest

from unitiso.designs import (
    AdmissibilityError,
    Design,
    DesignError,
    DesignParams,
    admissible_bm_pairs,
    bm_admissible,
    complement,
    complement_params,
    construct_bm,
    construct_hermitian,
    construct_order2_unital,
    design_from_json_dict,
    design_hash,
    design_to_json_bytes,
    load_design,
    save_design,
    unital_order,
    unital_params,
    validate_design,
)
from unitiso.gf import gf

from conftest import FANO_BLOCKS


# ----------------------------------------------------------------------
# parameter arithmetic and validation
# ----------------------------------------------------------------------


def test_params_identities_enforced():
    DesignParams(7, 7, 3, 3, 1)
    with pytest.raises(DesignError):
        DesignParams(7, 7, 3, 3, 2)
    with pytest.raises(DesignError):
        DesignParams(7, 8, 3, 3, 1)


def test_unital_params_family():
    assert unital_params(2).as_tuple() == (9, 12, 4, 3, 1)
    assert unital_params(3).as_tuple() == (28, 63, 9, 4, 1)
    assert unital_params(4).as_tuple() == (65, 208, 16, 5, 1)
    assert unital_order(unital_params(7)) == 7
    assert unital_order(DesignParams(7, 7, 3, 3, 1)) is None


def test_complement_params():
    assert complement_params(DesignParams(9, 12, 4, 3, 1)).as_tuple() == (9, 12, 8, 6, 5)
    u = unital_params(3)
    cu = complement_params(u)
    assert cu.as_tuple() == (28, 63, 54, 24, 46)


def test_validate_fano():
    assert validate_design(7, FANO_BLOCKS).as_tuple() == (7, 7, 3, 3, 1)


def test_validate_rejects_bad_pair_coverage():
    blocks = [b for b in FANO_BLOCKS[:6]]
    with pytest.raises(DesignError, match="pair"):
        validate_design(7, blocks)


def test_validate_rejects_ragged_blocks():
    with pytest.raises(DesignError, match="size"):
        validate_design(7, [(0, 1, 3), (1, 2)])


def test_validate_rejects_out_of_range():
    with pytest.raises(DesignError, match="range"):
        validate_design(7, [(0, 1, 9)])


def test_design_canonicalizes_block_order():
    d = Design(7, [tuple(reversed(b)) for b in reversed(FANO_BLOCKS)])
    assert d.blocks == tuple(sorted(tuple(sorted(b)) for b in FANO_BLOCKS))
    assert list(d.blocks) == sorted(d.blocks)


def test_complement_involution(u2):
    cc = complement(complement(u2))
    assert cc.blocks == u2.blocks
    assert cc.v == u2.v


def test_complement_of_order2(u2):
    c = complement(u2)
    assert c.params.as_tuple() == (9, 12, 8, 6, 5)


# ----------------------------------------------------------------------
# constructions
# ----------------------------------------------------------------------


def test_order2_unital():
    d = construct_order2_unital()
    assert d.params.as_tuple() == (9, 12, 4, 3, 1)
    assert d.provenance == {"kind": "order2"}
    assert unital_order(d.params) == 2


def test_hermitian_parameters(herm3, herm4):
    assert herm3.params.as_tuple() == (28, 63, 9, 4, 1)
    assert herm4.params.as_tuple() == (65, 208, 16, 5, 1)
    assert unital_order(herm3.params) == 3
    assert unital_order(herm4.params) == 4


def test_hermitian_rejects_small_or_bad_q():
    with pytest.raises(DesignError):
        construct_hermitian(2)
    with pytest.raises(Exception):
        construct_hermitian(6)


def test_hermitian_block_span(herm3):
    # two points determine exactly one block
    seen = {}
    for j, B in enumerate(herm3.blocks):
        for i1 in range(len(B)):
            for i2 in range(i1 + 1, len(B)):
                key = (B[i1], B[i2])
                assert key not in seen
                seen[key] = j
    assert len(seen) == 28 * 27 // 2


def test_bm_admissibility_odd_scan(bm3_pairs):
    F = gf(3, 2)
    assert len(bm3_pairs) > 0
    # the admissible discriminants are exactly the nonzero non-squares of GF(3),
    # so alpha with norm 2 and beta in GF(3) must appear
    subfield_beta = [(a, b) for (a, b) in bm3_pairs if F.in_subfield(b)]
    assert subfield_beta, "no admissible pair with beta in the subfield"
    for a, b in subfield_beta:
        assert F.norm_to_subfield(a) == 2


def test_bm_admissible_reasons():
    ok, reason = bm_admissible(3, 0, 0)
    assert not ok and reason == "discriminant is zero"
    ok, reason = bm_admissible(3, 1, 0)  # norm(1) = 1, a square in GF(3)
    assert not ok and "square" in reason
    ok, reason = bm_admissible(4, 0, 1)  # beta inside GF(4)
    assert not ok and reason == "beta lies in GF(q)"


def test_bm_construct_odd(bm3):
    assert bm3.params.as_tuple() == (28, 63, 9, 4, 1)
    assert bm3.provenance["kind"] == "bm"


def test_bm_inadmissible_raises():
    with pytest.raises(AdmissibilityError):
        construct_bm(3, 0, 0)


def test_bm_even_q():
    pairs = admissible_bm_pairs(2)
    assert pairs, "no admissible pair over GF(4)"
    d = construct_bm(2, *pairs[0])
    assert d.params.as_tuple() == (9, 12, 4, 3, 1)


# ----------------------------------------------------------------------
# JSON round trip
# ----------------------------------------------------------------------


def test_json_roundtrip(tmp_path, u2):
    path = tmp_path / "u2.json"
    save_design(u2, str(path))
    d2 = load_design(str(path))
    assert d2.v == u2.v
    assert d2.blocks == u2.blocks
    assert d2.provenance == u2.provenance
    assert design_hash(d2) == design_hash(u2)


def test_json_bytes_are_stable(u2):
    assert design_to_json_bytes(u2) == design_to_json_bytes(construct_order2_unital())


def test_loaded_designs_are_revalidated(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"v": 7, "blocks": [[0, 1, 3], [1, 2, 4]], "provenance": {}}')
    with pytest.raises(DesignError):
        load_design(str(path))


def test_malformed_json_rejected(tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{not json")
    with pytest.raises(DesignError):
        load_design(str(path))
    with pytest.raises(DesignError):
        design_from_json_dict({"blocks": []})
