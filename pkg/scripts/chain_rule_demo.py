"""Print both halves of the chain-rule example in COH.

With the Girard exponential the stable derivative of t o s at the empty
point differs from the composite of the derivatives; with the free
exponential the functor D commutes with Kleisli composition.
"""

import json

from cohdiff.coh.differential import chain_rule_report


def main() -> None:
    print(json.dumps(chain_rule_report(), indent=2, default=repr))


if __name__ == "__main__":
    main()
