"""Smoke tests for the python bindings: the full pipeline from contract
source to a Monte Carlo price, plus error translation."""

import math
import os

import pytest

import cltk

CONTRACTS = os.path.join(os.path.dirname(__file__), "..", "..", "contracts")

CALL_SRC = open(os.path.join(CONTRACTS, "european-call.cl")).read()
TEMPLATE_SRC = open(os.path.join(CONTRACTS, "template-option.cl")).read()


def test_parse_and_horizon():
    c = cltk.parse_contract(CALL_SRC)
    assert c.horizon() == 91
    assert c.is_template_closed()
    # Round trip through JSON preserves the printed form.
    assert str(cltk.contract_from_json(c.to_json())) == str(c)


def test_template_instantiation():
    c = cltk.parse_contract(TEMPLATE_SRC)
    assert not c.is_template_closed()
    inst = c.instantiate({"t0": 10, "t1": 80})
    assert inst.is_template_closed()
    assert inst.horizon() == 91


def test_compile_and_kernel():
    c = cltk.parse_contract(CALL_SRC)
    payoff = cltk.compile_contract(c, cut=False)
    assert "model" in str(payoff)
    k = cltk.emit_kernel(cltk.compile_contract(c))
    assert k.rows == [90]
    assert k.cols == ["AAPL"]
    assert "payoffInternal" in k.source()


def test_price_matches_closed_form():
    c = cltk.parse_contract(CALL_SRC)
    k = cltk.emit_kernel(cltk.compile_contract(c))
    model = '{"rate": 0.05, "labels": {"AAPL": {"spot": 100.0, "vol": 0.2}}}'
    (res,) = cltk.price(k, model, paths=100000, seed=42)
    bs = cltk.black_scholes_call(100.0, 100.0, 0.05, 0.2, 90.0 / 365.0)
    assert math.isclose(bs, 4.579032085233791, rel_tol=1e-12)
    assert abs(res["price"] - bs) <= 3.0 * res["std_error"]
    assert res["std_error"] <= 0.15


def test_determinism_across_threads():
    c = cltk.parse_contract(CALL_SRC)
    k = cltk.emit_kernel(cltk.compile_contract(c))
    model = '{"rate": 0.0, "labels": {"AAPL": {"spot": 100.0, "vol": 0.2}}}'
    one = cltk.price(k, model, paths=20000, seed=7, threads=1)
    eight = cltk.price(k, model, paths=20000, seed=7, threads=8)
    assert one == eight


def test_verify_properties():
    for prop in ("soundness", "totality", "cut", "commuting", "instantiation"):
        out = cltk.verify(prop, cases=25, seed=123)
        assert out["passed"], f"property {prop}: {out}"


def test_error_translation():
    with pytest.raises(cltk.ContractParseError):
        cltk.parse_contract("scale(")
    with pytest.raises(cltk.ContractTypeError):
        cltk.parse_contract("scale(obs(AAPL, 0) < 1.0, zero)")
    assert issubclass(cltk.ContractParseError, cltk.ContractError)
