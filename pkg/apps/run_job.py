#!/usr/bin/env python

import argparse
import os
import sys

from fcechlib import Logger, Settings
from fcechlib.cli import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, fixture_job, load_job, run
from fcechlib.errors import FcechError, ParseError

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), "config", "config_example.toml")
DEFAULT_JOB_DIR = os.path.join(os.path.dirname(__file__), "jobs")


def mainloop(config, jobs, output, as_json):
    settings = Settings(config)
    logger = Logger(output) if output else None
    worst = 0
    for job_path in jobs:
        if not os.path.exists(job_path):
            job_path = os.path.join(DEFAULT_JOB_DIR, job_path)
        try:
            if job_path.endswith((".json", ".toml")):
                job = load_job(job_path, settings)
            else:
                job = fixture_job(os.path.basename(job_path), settings)
        except (FcechError, KeyError) as e:
            print(f"error: {e}", file=sys.stderr)
            worst = max(worst, EXIT_INPUT_ERROR)
            continue
        try:
            report = run(job, logger)
        except ParseError as e:
            print(f"error: {e}", file=sys.stderr)
            worst = max(worst, EXIT_INPUT_ERROR)
            continue
        except FcechError as e:
            print(f"error: {job.name}: {e}", file=sys.stderr)
            worst = max(worst, EXIT_CHECK_FAILED)
            continue
        print(report.to_json() if as_json else "\n".join(report.lines()))
        worst = max(worst, report.exit_code)
    if logger is not None:
        logger.dump(overwrite=False)
    return worst


def parse():
    parser = argparse.ArgumentParser(description="Run bundled or custom fcech jobs in a row.")
    parser.add_argument(
        "-c", "--config", default=DEFAULT_CONFIG_PATH, help="config file"
    )
    parser.add_argument("-o", "--output", default=None, help="output filename")
    parser.add_argument("--json", action="store_true", help="print JSON reports")
    parser.add_argument(
        "jobs",
        nargs="*",
        default=["point.json", "interval.json", "circle.json", "interval_pair.json", "finite_wedge.json"],
        help="job files (looked up in apps/jobs) or fixture names",
    )
    return parser.parse_args()


def main():
    args = parse()
    return mainloop(args.config, args.jobs, args.output, args.json)


if __name__ == "__main__":
    sys.exit(main())
