from datetime import datetime, timedelta, timezone

import pytest

# Table 1: m3.large spot prices and the on-demand price they are divided by
TABLE1_FIXED = 0.154
TABLE1_PRICES = [0.043, 0.1, 0.14, 0.15, 0.228, 0.5]
TABLE1_ROUNDED = [0.279, 0.649, 0.909, 0.974, 1.0, 1.0]

PST = timezone(timedelta(hours=-8))
START = datetime(2015, 3, 12, 0, 1, 10, tzinfo=PST)


def csv_text(prices, labels=None, start=START):
    header = "timestamp,price" + (",instance_type,os,zone" if labels else "")
    lines = [header]
    for i, p in enumerate(prices):
        ts = (start + timedelta(hours=i)).isoformat()
        row = f"{ts},{p}"
        if labels:
            row += "," + ",".join(labels)
        lines.append(row)
    return "\n".join(lines) + "\n"


def ec2_text(prices, labels=("m3.large", "Linux/UNIX", "us-east-1b"), start=START):
    # newest first, as the AWS tool prints it
    lines = []
    for i, p in reversed(list(enumerate(prices))):
        ts = (start + timedelta(hours=i)).isoformat()
        lines.append("\t".join(["SPOTINSTANCEPRICE", str(p), ts, *labels]))
    return "\n".join(lines) + "\n"


@pytest.fixture
def table1_csv(tmp_path):
    path = tmp_path / "table1.csv"
    path.write_text(csv_text(TABLE1_PRICES))
    return path


@pytest.fixture
def flat_csv(tmp_path):
    path = tmp_path / "flat.csv"
    path.write_text(csv_text([0.0321] * 20))
    return path


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[1][2:])):
            terminalreporter.write_line(line)
