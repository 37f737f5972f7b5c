"""Exact shadowing analysis for free semigroup actions on finite metric spaces."""
