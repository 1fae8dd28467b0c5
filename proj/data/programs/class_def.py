class Dog:
    x = 1
