#!/usr/bin/env python3
"""
Script to verify that the CLI help text documents every option.
"""

import sys

from ncinequality.cli import build_parser


def _subcommand_help(parser, name):
    for action in parser._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name].format_help()
    return ""


def main():
    """Check help documentation completeness."""
    print("🔍 Checking ncinequality help documentation...\n")

    parser = build_parser()
    required_features = {
        "derive": ["--n-cycle", "--scenario", "--format", "--out", "--config"],
        "evaluate": ["--n-cycle", "--scenario", "--kcbs", "--realization", "--visibility"],
        "sweep": ["--kcbs", "--realization", "--from", "--to", "--steps", "--threads"],
    }

    missing = []
    for command, flags in required_features.items():
        content = _subcommand_help(parser, command)
        print(f"✅ {command}:")
        for flag in flags:
            if flag in content:
                print(f"   ✓ {flag}")
            else:
                print(f"   ✗ {flag} - MISSING!")
                missing.append(f"{command} {flag}")

    print(f"\n{'='*60}")
    if not missing:
        print("🎉 SUCCESS: All options are properly documented!")
        return 0
    print(f"⚠️  WARNING: {len(missing)} options are missing from help:")
    for item in missing:
        print(f"   - {item}")
    return 1


if __name__ == "__main__":
    sys.exit(main())
