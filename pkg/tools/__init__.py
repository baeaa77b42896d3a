"""Command registrations and the verification harness."""
