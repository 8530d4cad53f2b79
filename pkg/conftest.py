#!/usr/bin/env python
# -*- coding: UTF-8 -*-


def pytest_addoption(parser):
    parser.addoption(
        "--slow",
        action="store_true",
        default=False,
        help="run the full-resolution parameter studies",
    )
