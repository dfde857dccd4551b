import logging
from typing import Optional

import mpmath
import pandas as pd

from .special_functions import BigReal

logging.basicConfig(
    level = logging.INFO,
    format = '%(asctime)s - %(levelname)s - %(message)s'
)


def merge_reports(*dataframes: pd.DataFrame,
                  key: str = 'representation') -> Optional[pd.DataFrame]:
    """
    Stack report tables that share a key column.

    Parameters
    ----------
    *dataframes : pd.DataFrame
        Variable number of report tables
    key : str
        Column every table must carry

    Returns
    -------
    pd.DataFrame or None
        Stacked table with a fresh index, or None if any input is missing
        or malformed
    """
    if not dataframes:
        logging.error("No dataframes provided for merging")
        return None

    if any(df is None for df in dataframes):
        logging.error("One or more input dataframes are None. Cannot proceed with merging.")
        return None

    try:
        for i, df in enumerate(dataframes):
            if key not in df.columns:
                raise KeyError(f"Dataframe {i+1} missing {key} column")

        merged_df = pd.concat(dataframes, ignore_index = True, sort = False)
        logging.info(f"Merged {len(dataframes)} report tables into shape {merged_df.shape}, unique {key} values: {merged_df[key].nunique()}")
        return merged_df

    except Exception as e:
        logging.error(f"Error merging report tables: {e}")
        return None


def format_decimal(value: BigReal, digits: Optional[int] = None) -> str:
    """Decimal string cut after `digits` significant digits (default: all claimed digits)."""
    return value.to_decimal_string(digits)


def format_bound(bound) -> str:
    """Short scientific rendering of an error bound; 'inf' when unbounded."""
    if mpmath.isinf(bound):
        return 'inf'
    return mpmath.nstr(mpmath.mpf(bound), 6, min_fixed = 1, max_fixed = 0)
