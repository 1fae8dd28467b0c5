def greet(name):
    print("hello")
    return name

who = greet("John")
print(who)
