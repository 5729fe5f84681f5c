"""Tests for localqst"""
