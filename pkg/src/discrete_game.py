"""
Exact enumeration of the three-player zero-sum coin game.

Player A lends `loan_coins` to B at a simple interest of `interest_coins`.
B then trades against C, who holds `competitor_coins`. At the end of the
round B holds some b_end in 0..total_pot, every value equally likely, and
repays A as much of principal + interest as it can. Debts do not carry over
to the next round.

All arithmetic here is integer or Fraction; no floats.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import pandas as pd

from src.utils import DomainError, setup_logging

logger = setup_logging(__name__)

# Column order of the published coin-game tables
TABLE_COLUMNS = [
    "iteration", "capital_loaned", "b_outcome", "c_outcome",
    "b_net", "a_win", "a_loss", "a_recovered",
]


@dataclass(frozen=True)
class DiscreteGameConfig:
    """Loan size, competitor endowment and interest, in whole coins."""

    loan_coins: int
    competitor_coins: int
    interest_coins: int = 0

    def __post_init__(self):
        for name in ("loan_coins", "competitor_coins", "interest_coins"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise DomainError(f"{name} must be an integer, got {value!r}")
        if self.loan_coins < 1:
            raise DomainError(f"loan_coins must be >= 1, got {self.loan_coins}")
        if self.competitor_coins < 0:
            raise DomainError(f"competitor_coins must be >= 0, got {self.competitor_coins}")
        if self.interest_coins < 0:
            raise DomainError(f"interest_coins must be >= 0, got {self.interest_coins}")

    @property
    def total_pot(self) -> int:
        return self.loan_coins + self.competitor_coins

    @property
    def amount_due(self) -> int:
        return self.loan_coins + self.interest_coins


@dataclass(frozen=True)
class OutcomeRow:
    """One equiprobable end state of a round."""

    b_end: int
    a_recovered: int
    a_win: int
    a_loss: int
    b_net: int
    c_end: int

    @property
    def a_net(self) -> int:
        return self.a_win - self.a_loss


@dataclass(frozen=True)
class EnumerationSummary:
    """All outcomes of one configuration plus the Totals row."""

    config: DiscreteGameConfig
    rows: list[OutcomeRow] = field(default_factory=list)
    total_win: int = 0
    total_loss: int = 0

    @property
    def net_total(self) -> int:
        return self.total_win - self.total_loss

    @property
    def total_b_net(self) -> int:
        return sum(r.b_net for r in self.rows)

    @property
    def expected_net(self) -> Fraction:
        """Investor expectation per round, in coins."""
        return Fraction(self.net_total, len(self.rows))


def _check_b_end(b_end: int, config: DiscreteGameConfig):
    if isinstance(b_end, bool) or not isinstance(b_end, int):
        raise DomainError(f"b_end must be an integer, got {b_end!r}")
    if not 0 <= b_end <= config.total_pot:
        raise DomainError(f"b_end={b_end} outside [0, {config.total_pot}]")


def investor_payoff(b_end: int, config: DiscreteGameConfig) -> int:
    """Coins A gains (positive) or loses (negative) when B ends with b_end."""
    _check_b_end(b_end, config)
    return min(b_end, config.amount_due) - config.loan_coins


def borrower_net(b_end: int, config: DiscreteGameConfig) -> int:
    """Coins B keeps after repaying principal and interest."""
    _check_b_end(b_end, config)
    return max(b_end - config.amount_due, 0)


def outcome_row(b_end: int, config: DiscreteGameConfig) -> OutcomeRow:
    """Build the full row for one end state."""
    _check_b_end(b_end, config)
    a_recovered = min(b_end, config.amount_due)
    row = OutcomeRow(
        b_end=b_end,
        a_recovered=a_recovered,
        a_win=max(a_recovered - config.loan_coins, 0),
        a_loss=max(config.loan_coins - a_recovered, 0),
        b_net=borrower_net(b_end, config),
        c_end=config.total_pot - b_end,
    )
    # Zero-sum: every coin in the pot ends with exactly one player
    assert row.a_recovered + row.b_net + row.c_end == config.total_pot
    return row


def enumerate_outcomes(config: DiscreteGameConfig) -> EnumerationSummary:
    """Enumerate every b_end in 0..total_pot and total A's wins and losses."""
    rows = [outcome_row(b, config) for b in range(config.total_pot + 1)]
    summary = EnumerationSummary(
        config=config,
        rows=rows,
        total_win=sum(r.a_win for r in rows),
        total_loss=sum(r.a_loss for r in rows),
    )
    logger.debug(f"L={config.loan_coins} C={config.competitor_coins} "
                 f"k={config.interest_coins}: win={summary.total_win} "
                 f"loss={summary.total_loss}")
    return summary


def _net_coins(loan_coins: int, total_pot: int, interest_coins: int) -> int:
    """A's wins minus losses summed over every b_end, without building rows."""
    due = loan_coins + interest_coins
    return sum(min(b, due) for b in range(total_pot + 1)) - (total_pot + 1) * loan_coins


def discrete_breakeven(loan_coins: int, competitor_coins: int) -> int | None:
    """
    Smallest whole-coin interest at which A's wins cover A's losses.

    Scans k = 0..total_pot; interest beyond the pot can never be collected.
    Each k is scored with the payoff-sum identity in integer arithmetic, so
    the scan matches enumerate_outcomes without materializing the table.

    Returns:
        The interest in coins, or None when no k in range breaks even
        (e.g. the competitor holds nothing B could win).
    """
    config = DiscreteGameConfig(loan_coins, competitor_coins, 0)
    for k in range(config.total_pot + 1):
        if _net_coins(loan_coins, config.total_pot, k) >= 0:
            return k

    logger.debug(f"No break-even for L={loan_coins}, C={competitor_coins}")
    return None


def summary_frame(summary: EnumerationSummary) -> pd.DataFrame:
    """
    Render a summary in the column order of the published coin tables.

    The last row holds the totals (B net, A win, A loss); its other cells
    are left empty.
    """
    config = summary.config
    records = []
    for i, row in enumerate(summary.rows, start=1):
        records.append({
            "iteration": i,
            "capital_loaned": config.loan_coins,
            "b_outcome": row.b_end,
            "c_outcome": row.c_end,
            "b_net": row.b_net,
            "a_win": row.a_win,
            "a_loss": row.a_loss,
            "a_recovered": row.a_recovered,
        })
    totals = dict.fromkeys(TABLE_COLUMNS, "")
    totals.update({
        "iteration": "Totals",
        "b_net": summary.total_b_net,
        "a_win": summary.total_win,
        "a_loss": summary.total_loss,
    })
    records.append(totals)

    return pd.DataFrame(records, columns=TABLE_COLUMNS)
