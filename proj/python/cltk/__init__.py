"""Contract language toolkit.

Parse declarative financial contracts, compile them to a payoff
intermediate form, flatten to dense kernels, and price by deterministic
Monte Carlo. See the README at the repository root for the contract
syntax and JSON schemas.
"""

from ._cltk import (
    Contract,
    ContractError,
    ContractParseError,
    ContractTypeError,
    Kernel,
    Payoff,
    black_scholes_call,
    compile_contract,
    contract_from_json,
    emit_kernel,
    parse_contract,
    price,
    verify,
)

__all__ = [
    "Contract",
    "ContractError",
    "ContractParseError",
    "ContractTypeError",
    "Kernel",
    "Payoff",
    "black_scholes_call",
    "compile_contract",
    "contract_from_json",
    "emit_kernel",
    "parse_contract",
    "price",
    "verify",
]
