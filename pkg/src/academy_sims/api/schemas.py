"""Request bodies. Strings are length-capped well below the transport body
limit so validation errors stay cheap."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

Text = Field(min_length=1, max_length=191)
OptText = Field(default=None, max_length=191)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", str_max_length=4096)


class LoginBody(StrictModel):
    email: str = Text
    password: str = Field(min_length=1, max_length=1024)


class StaffRegisterBody(StrictModel):
    pin: str = Text
    surName: str = Text
    firstName: str = Text
    email: str = Text
    password: str = Field(min_length=1, max_length=1024)


class CadetRegisterBody(StrictModel):
    pin: str = Text
    npaNumber: str = Text
    surName: str = Text
    firstName: str = Text
    middleName: str | None = OptText
    email: str = Text
    password: str = Field(min_length=1, max_length=1024)
    rc: int = Field(ge=1)
    level: int
    semester: str = Text
    squad: int = Field(ge=1)
    sex: str = Field(min_length=1, max_length=1)
    dob: str | None = OptText
    homeTown: str | None = OptText
    localGovt: str | None = OptText
    state: str | None = OptText
    address: str | None = OptText
    nextOfKinSurName: str | None = OptText
    nextOfKinFirstName: str | None = OptText
    nextOfKinRelationship: str | None = OptText
    nextOfKinAddress: str | None = OptText


class ResetBeginBody(StrictModel):
    email: str = Text


class ResetCompleteBody(StrictModel):
    token: str = Field(min_length=1, max_length=512)
    newPassword: str = Field(min_length=1, max_length=1024)


class PasswordChangeBody(StrictModel):
    currentPassword: str = Field(min_length=1, max_length=1024)
    newPassword: str = Field(min_length=1, max_length=1024)


class ProfilePatchBody(StrictModel):
    # role-dependent subsets; handlers ignore fields foreign to the caller
    name: str | None = OptText
    passport: str | None = OptText
    address: str | None = OptText
    dob: str | None = OptText
    cv: str | None = OptText
    designation: str | None = OptText
    homeTown: str | None = OptText
    localGovt: str | None = OptText
    state: str | None = OptText
    nextOfKinSurName: str | None = OptText
    nextOfKinFirstName: str | None = OptText
    nextOfKinRelationship: str | None = OptText
    nextOfKinAddress: str | None = OptText


class StaffPatchBody(StrictModel):
    surName: str | None = OptText
    firstName: str | None = OptText
    designation: str | None = OptText
    department: str | None = OptText
    address: str | None = OptText
    email: str | None = OptText


class CadetPatchBody(StrictModel):
    surName: str | None = OptText
    firstName: str | None = OptText
    middleName: str | None = OptText
    level: int | None = None
    squad: int | None = Field(default=None, ge=1)
    semester: str | None = OptText
    address: str | None = OptText


class StaffPinBody(StrictModel):
    department: str = Text
    count: int = 1


class CadetPinBody(StrictModel):
    count: int = 1


class CourseBody(StrictModel):
    courseCode: str = Text
    courseTitle: str = Text
    level: int
    unit: int
    semester: str = Text
    year: int


class CoursePatchBody(StrictModel):
    courseTitle: str | None = OptText
    level: int | None = None
    unit: int | None = None
    semester: str | None = OptText
    year: int | None = None


class AssignmentBody(StrictModel):
    courseCode: str = Text
    staffId: int
    sessionYear: int | None = None


class RegistrationWindowBody(StrictModel):
    open: bool


class EventBody(StrictModel):
    title: str = Text
    body: str = Field(min_length=1, max_length=4096)
    eventDate: str = Text


class CourseRegistrationBody(StrictModel):
    courseCodes: list[str] = Field(min_length=0, max_length=64)
